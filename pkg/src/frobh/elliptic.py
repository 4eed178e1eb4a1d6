"""Genus-1 sine-Gordon modulation geometry: theta functions, periods of
mu^2 = lambda (lambda - u1)(lambda - u2), the flat chart (p1, p2), and the
dual structure constants with their theta closed forms.

Cycle conventions realize the sheets-and-cuts normalization: the a-cycle
encircles the cut [0, u1] on the first sheet, the conjugate cycle encircles
[u1, u2]; periods are computed by Gauss-Chebyshev quadrature on the collapsed
cuts with a continuously tracked square-root branch."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchCollision, NomeOutOfDisk

TWO_PI_I = 2j * math.pi

# eta1 = (1/6) pi^2/omega1 * theta1'''(0)/theta1'(0) in the e^{2nz} series
# convention (the sign absorbs the (i pi)^2 from the exponent convention);
# pinned by the period-derivative checks
ETA1_PREFACTOR = 1.0 / 6.0
LEGENDRE_CONST = 1.0         # eta1 omega2 - eta2 omega1 = pi i


@dataclass
class ThetaContext:
    tau: complex
    prec: int = 53

    def __post_init__(self):
        self.q = cmath.exp(1j * math.pi * self.tau)
        if abs(self.q) >= 1:
            raise NomeOutOfDisk(f"|q| = {abs(self.q):.3f} >= 1")
        # |q|^(N^2) below working precision
        digits = 18 if self.prec <= 53 else int(self.prec * 0.302) + 2
        self.N = max(4, int(math.sqrt(digits / -math.log10(abs(self.q)))) + 2)


def theta(j, z, ctx: ThetaContext):
    """Jacobi theta per the e^{2nz} convention (theta_j(z, tau), j = 1..4)."""
    q, N = ctx.q, ctx.N
    z = complex(z)
    total = 0j
    if j in (1, 2):
        for n in range(-N - 1, N + 1):
            term = q ** ((n + 0.5) ** 2) * cmath.exp((2 * n + 1) * z)
            if j == 1:
                term *= (-1) ** n
            total += term
        return -1j * total if j == 1 else total
    for n in range(-N, N + 1):
        term = q ** (n * n) * cmath.exp(2 * n * z)
        if j == 4:
            term *= (-1) ** n
        total += term
    return total


def theta0(j, ctx: ThetaContext):
    return theta(j, 0.0, ctx)


def theta1_derivatives_at_zero(ctx: ThetaContext, order=3):
    """(theta1', theta1'', theta1''') at z = 0 in the e^{2nz} convention."""
    q, N = ctx.q, ctx.N
    out = []
    for der in range(1, order + 1):
        total = 0j
        for n in range(-N - 1, N + 1):
            total += (-1) ** n * q ** ((n + 0.5) ** 2) * (2 * n + 1) ** der
        out.append(-1j * total)
    return tuple(out)


@dataclass
class SGPoint:
    u1: complex
    u2: complex
    omega1: complex
    omega2: complex
    tau: complex
    e1: complex
    e2: complex
    e3: complex
    eta1: complex
    eta2: complex

    def theta_ctx(self, prec=53):
        return ThetaContext(self.tau, prec)


def _segment_period(p, q, r, nodes=96):
    """One-sided integral over a path from p to q of d(lambda)/mu with
    mu^2 = (l-p)(l-q)(l-r): the collapsed-cut form of a period loop.

    The path is the straight segment, bent into a parabolic arc when the
    third branch point r sits too close to it.  Writing lambda(s) with
    endpoints at s = ±1 gives (lambda-p)(lambda-q) = (1-s^2) A(s) B(s) with
    nonvanishing A, B, so Gauss-Chebyshev quadrature absorbs the endpoint
    singularities and the remaining square root is branch-tracked in s."""
    p, q, r = complex(p), complex(q), complex(r)
    d = q - p
    mid = (p + q) / 2
    # distance from r to the segment
    t = ((r - p) / d).real
    dist = abs(p + min(max(t, 0.0), 1.0) * d - r)
    bump = 0j
    if dist < 0.25 * abs(d):
        side = (r - mid) / d
        bump = (-1j if side.imag >= 0 else 1j) * 0.5 * d
    k = np.arange(1, nodes + 1)
    s = np.cos((2 * k - 1) * math.pi / (2 * nodes))[::-1]
    lam = mid + d * s / 2 + bump * (1 - s * s)
    dlam_ds = d / 2 - 2 * bump * s
    # (lambda-p)(lambda-q) = (1-s^2) A B
    a_fac = d / 2 + bump * (1 - s)
    b_fac = -d / 2 + bump * (1 + s)
    core = -a_fac * b_fac * (lam - r)
    roots = np.zeros(nodes, dtype=complex)
    roots[0] = cmath.sqrt(core[0])
    for i in range(1, nodes):
        roots[i] = roots[i - 1] * cmath.sqrt(core[i] / core[i - 1])
    total = np.sum(dlam_ds / roots)
    return (math.pi / nodes) * total / 1j


def periods_from_branch_points(u1, u2, prec=53, nodes=96) -> SGPoint:
    """Periods and Weierstrass data of mu^2 = lambda(lambda-u1)(lambda-u2).

    omega1 loops the cut [0, u1] on the first sheet, omega2 the segment
    [u1, u2], with Im(omega2/omega1) > 0 enforced by orientation."""
    u1, u2 = complex(u1), complex(u2)
    scale = max(abs(u1), abs(u2))
    if abs(u1 - u2) < 1e-10 * scale or abs(u1) < 1e-12 * scale \
            or abs(u2) < 1e-12 * scale:
        raise BranchCollision("branch points collided or hit zero")
    i1 = _segment_period(0, u1, u2, nodes)
    i2 = _segment_period(u1, u2, 0, nodes)
    e1 = (2 * u1 - u2) / 3
    e2 = (2 * u2 - u1) / 3
    e3 = -(u1 + u2) / 3
    omega1, omega2, tau = _calibrate_basis(i1, i2, e1, e2, e3)
    ctx = ThetaContext(tau, prec)
    d1, _, d3 = theta1_derivatives_at_zero(ctx)
    eta1 = ETA1_PREFACTOR * (math.pi ** 2 / omega1) * (d3 / d1)
    eta2 = (eta1 * omega2 - LEGENDRE_CONST * 1j * math.pi) / omega1
    return SGPoint(u1, u2, omega1, omega2, tau, e1, e2, e3, eta1, eta2)


_BASIS_MATRICES = ((1, -1, 1, 0), (1, 0, 0, 1), (0, -1, 1, 0), (1, 1, 0, 1),
                   (1, 0, 1, 1), (1, -1, 0, 1), (0, -1, 1, -1), (1, 1, 1, 2),
                   (2, -1, 1, 0), (1, 0, -1, 1), (1, -2, 1, -1), (1, 2, 0, 1))


def _calibrate_basis(i1, i2, e1, e2, e3):
    """Deterministic homology marking: the unique small SL(2,Z) recombination
    of the raw cut integrals for which the printed branch-point/theta
    identities hold (this realizes the first-sheet normalization)."""
    for a, b, c, d in _BASIS_MATRICES:
        for sgn in (1, -1):
            w1 = sgn * (a * i1 + b * i2)
            w2 = sgn * (c * i1 + d * i2)
            if abs(w1) < 1e-300:
                continue
            tau = w2 / w1
            if tau.imag <= 1e-10:
                w2 = -w2
                tau = -tau
            if tau.imag <= 1e-10 or tau.imag > 20:
                continue
            try:
                ctx = ThetaContext(tau)
            except NomeOutOfDisk:
                continue
            pref = (math.pi / w1) ** 2
            r1 = abs(e1 - e3 - pref * theta0(4, ctx) ** 4)
            r2 = abs(e2 - e3 + pref * theta0(2, ctx) ** 4)
            r3 = abs(e1 - e2 - pref * theta0(3, ctx) ** 4)
            scale = max(abs(e1 - e3), abs(e2 - e3), abs(e1 - e2))
            if max(r1, r2, r3) < 1e-7 * scale:
                return w1, w2, tau
    raise BranchCollision("could not realize the first-sheet homology marking")


def theta_identity_residuals(pt: SGPoint, prec=53):
    """The three printed branch-point/theta identities (relative residuals)."""
    ctx = pt.theta_ctx(prec)
    pref = (math.pi / pt.omega1) ** 2
    t2, t3, t4 = (theta0(2, ctx), theta0(3, ctx), theta0(4, ctx))
    vals = {
        "e1-e3 = (pi/w1)^2 th4^4": (pt.e1 - pt.e3, pref * t4 ** 4),
        "e2-e3 = -(pi/w1)^2 th2^4": (pt.e2 - pt.e3, -pref * t2 ** 4),
        "e1-e2 = (pi/w1)^2 th3^4": (pt.e1 - pt.e2, pref * t3 ** 4),
    }
    return {k: abs(a - b) / max(abs(a), 1e-30) for k, (a, b) in vals.items()}


def u_roundtrip_residual(pt: SGPoint, prec=53):
    """u1 = i e^{p1} th4^2/th2^2 and u2 = -i e^{p1} th2^2/th4^2."""
    ctx = pt.theta_ctx(prec)
    p1 = 0.5 * cmath.log(pt.u1 * pt.u2)
    t2, t4 = theta0(2, ctx), theta0(4, ctx)
    cand1 = 1j * cmath.exp(p1) * t4 ** 2 / t2 ** 2
    cand2 = -1j * cmath.exp(p1) * t2 ** 2 / t4 ** 2
    r1 = min(abs(cand1 - pt.u1), abs(-cand1 - pt.u1)) / abs(pt.u1)
    r2 = min(abs(cand2 - pt.u2), abs(-cand2 - pt.u2)) / abs(pt.u2)
    return max(r1, r2)


def sg_flat_chart(pt: SGPoint):
    """(p1, p2) with p1 = (1/2) log(u1 u2), p2 = tau/(2 pi i), and the
    closed-form Jacobian dp/du."""
    p1 = 0.5 * cmath.log(pt.u1 * pt.u2)
    p2 = pt.tau / TWO_PI_I
    w = 1.0 / (2 * pt.omega1 ** 2 * (pt.u1 - pt.u2))
    jac = [[0.5 / pt.u1, 0.5 / pt.u2],
           [w / pt.u1, -w / pt.u2]]
    return p1, p2, jac


def sg_metric_diag(pt: SGPoint):
    """Diagonal weights of the intersection form in canonical coordinates:
    g_i = phi(P_i)^2/(2 u_i) with phi = d(lambda)/(2 mu)."""
    g1 = 1.0 / (2 * pt.omega1 ** 2 * (pt.u1 - pt.u2) * pt.u1 ** 2)
    g2 = -1.0 / (2 * pt.omega1 ** 2 * (pt.u1 - pt.u2) * pt.u2 ** 2)
    return g1, g2


def sg_metric_in_chart(pt: SGPoint):
    """g^{-1}(dp_a, dp_b): must be the antidiagonal identity."""
    g1, g2 = sg_metric_diag(pt)
    _, _, jac = sg_flat_chart(pt)
    ginv = [[0, 0], [0, 0]]
    for a in range(2):
        for b in range(2):
            ginv[a][b] = (jac[a][0] * jac[b][0] / g1
                          + jac[a][1] * jac[b][1] / g2)
    return ginv


def sg_structure_constants(pt: SGPoint, prec=53):
    """Lowered dual structure constants c_{abc} in the (p1, p2) chart, via the
    canonical-coordinate definition pushed through the Jacobian, together with
    the closed forms (omega1^4 (u1-u2)^2 and pi^4 theta3^8)."""
    g1, g2 = sg_metric_diag(pt)
    _, _, jac = sg_flat_chart(pt)
    jinv = _inv2(jac)  # du_i/dp_a
    w = [g1 / pt.u1, g2 / pt.u2]
    c = [[[0j] * 2 for _ in range(2)] for _ in range(2)]
    for a in range(2):
        for b in range(2):
            for d in range(2):
                c[a][b][d] = sum(w[i] * jinv[i][a] * jinv[i][b] * jinv[i][d]
                                 for i in range(2))
    ctx = pt.theta_ctx(prec)
    closed_period = pt.omega1 ** 4 * (pt.u1 - pt.u2) ** 2
    closed_theta = math.pi ** 4 * theta0(3, ctx) ** 8
    return {"c111": c[0][0][0], "c112": c[0][0][1], "c122": c[0][1][1],
            "c222": c[1][1][1], "c222_period_form": closed_period,
            "c222_theta_form": closed_theta}


def _inv2(m):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return [[m[1][1] / det, -m[0][1] / det],
            [-m[1][0] / det, m[0][0] / det]]


def lemma_period_derivative_residuals(u1, u2, h=1e-6, prec=53, nodes=128):
    """FD residuals of the four closed-form period derivatives:
    d(omega_j)/d(u_i) = -(2 eta_j + e_i omega_j) / (2 u_i (u_i - u_j'))."""
    base = periods_from_branch_points(u1, u2, prec, nodes)

    def periods(v1, v2):
        p = periods_from_branch_points(v1, v2, prec, nodes)
        # keep the branch aligned with the base point
        w1 = p.omega1 if abs(p.omega1 - base.omega1) < abs(-p.omega1 - base.omega1) else -p.omega1
        w2 = p.omega2 if abs(p.omega2 - base.omega2) < abs(-p.omega2 - base.omega2) else -p.omega2
        return w1, w2

    out = {}
    targets = {
        ("omega1", "u1"): -(2 * base.eta1 + base.e1 * base.omega1) / (2 * u1 * (u1 - u2)),
        ("omega1", "u2"): -(2 * base.eta1 + base.e2 * base.omega1) / (2 * u2 * (u2 - u1)),
        ("omega2", "u1"): -(2 * base.eta2 + base.e1 * base.omega2) / (2 * u1 * (u1 - u2)),
        ("omega2", "u2"): -(2 * base.eta2 + base.e2 * base.omega2) / (2 * u2 * (u2 - u1)),
    }
    p1p = periods(u1 + h, u2)
    p1m = periods(u1 - h, u2)
    p2p = periods(u1, u2 + h)
    p2m = periods(u1, u2 - h)
    fd = {
        ("omega1", "u1"): (p1p[0] - p1m[0]) / (2 * h),
        ("omega1", "u2"): (p2p[0] - p2m[0]) / (2 * h),
        ("omega2", "u1"): (p1p[1] - p1m[1]) / (2 * h),
        ("omega2", "u2"): (p2p[1] - p2m[1]) / (2 * h),
    }
    for key in targets:
        scale = max(abs(targets[key]), 1e-12)
        out["d%s/d%s" % key] = abs(fd[key] - targets[key]) / scale
    return out


def omega_pm_at_ramification(pt: SGPoint):
    """Values of the FFM pair at the two ramification points and the speeds
    v_i = -(1/2) Omega^+(P_i)/Omega^-(P_i).

    Omega^{±} have double poles at lambda = infinity (coefficient 1) and
    lambda = 0 (coefficient ±1/16) and vanishing a-periods; on the Weierstrass
    side they are [wp(z) + B wp(z - w3/2) + C] dz."""
    c3 = pt.u1 * pt.u2  # (e3-e1)(e3-e2)
    b = 1.0 / (16.0 * cmath.sqrt(c3))
    plus = _omega_ab_values(pt, 1.0, b)
    minus = _omega_ab_values(pt, 1.0, -b)
    speeds = [-0.5 * p / m for p, m in zip(plus, minus)]
    return plus, minus, speeds


def _omega_ab_values(pt: SGPoint, acoef, bcoef):
    # a-period of wp(z) dz over omega1 is -2 eta1; constant C restores zero
    c = (2 * pt.eta1 * (acoef + bcoef)) / pt.omega1
    vals = []
    for i, (e_self, e_other) in enumerate(((pt.e1, pt.e2), (pt.e2, pt.e1))):
        # wp at the half periods: wp(w_i/2) = e_i, wp(w_i/2 - w3/2) = e_j'
        f = acoef * e_self + bcoef * e_other + c
        u_i = pt.u1 if i == 0 else pt.u2
        other = pt.u2 if i == 0 else pt.u1
        wpp = 2 * (e_self - e_other) * (e_self - pt.e3)
        vals.append(f * cmath.sqrt(2.0 / wpp))
    return vals
