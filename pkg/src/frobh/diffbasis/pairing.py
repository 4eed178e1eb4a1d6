"""The genus-0 bilinear pairing on horizontal differentials.

The pairing couples the Laurent tails of the first argument to residues of
the second, and its log weights to principal-value integrals from the base
point P0 (the preimage of lambda = 1 on a fixed branch).  Signs are fixed so
that d<O1,O2>/du_i = O1(P_i) O2(P_i) / 2 holds (the localization identity);
relative to a naive reading of the textbook formula this flips the zero-side
terms, which is forced already by covers of the form z(z-r).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from ..cover import CoverG0, canonical_coordinates, pair_eval_at_ramification
from ..errors import DivergentPairing, NotRational
from ..family import covers_along_u
from ..numcore import INF, as_complex, nabs, poly_roots
from ..numcore.scalars import stable_nlog
from ..numcore.series import LogLaurent  # noqa: F401 (type of expand_at results)
from ..numcore.pathint import TrackedPath
from ..numcore.series import integrate_loglaurent
from .core import (DEFAULT_TERMS, Differential, PointFrame, _close,
                   _log_series_of_linear, expand_at, structural_log_weights)

TWO_PI_I = 2j * math.pi
# orientation of the collapsed cut at a p.v. endpoint, per side
HALF_RESIDUE_SIGN_ZERO = +1
HALF_RESIDUE_SIGN_POLE = +1


def base_point(cover: CoverG0, hint=None):
    """Preimage of lambda = 1: smallest |z| root of N - D (or nearest to hint)."""
    poly = cover.numerator() - cover.denominator()
    roots = [as_complex(r) for r, _ in poly_roots(poly)]
    if hint is not None:
        return min(roots, key=lambda r: abs(r - complex(hint)))
    return min(roots, key=lambda r: (round(abs(r), 10), r.real, r.imag))


# ----------------------------------------------------------------------
# singular data extraction
# ----------------------------------------------------------------------

def extract_singular_data(omega: Differential, cover: CoverG0, depth=6,
                          frames=None, expansions=None):
    """Per marked point: (tails {j: B_j, j<=-2}, logweights {l: R_l or S_l}).

    The A-part contributions induced by log weights (weight * tau^{ml-1} on
    the zero side, -weight on the pole side) are removed from the tails.
    """
    data = {}
    for P in cover.marked_points():
        fr = frames[P] if frames else PointFrame(cover, P, depth + 8)
        e = expansions[P] if expansions else expand_at(omega, cover, P,
                                                       depth + 8, frame=fr)
        sigma = 1 if any(_close(loc, P) for loc, _ in cover.zeros) else -1
        logs = structural_log_weights(omega, cover, P)
        induced = {fr.m_signed * l - 1: sigma * w for l, w in logs.items()}
        residue = e.a.coeff(-1) - induced.get(-1, 0)
        if not _is_zero(residue):
            logs[0] = logs.get(0, 0) + (residue if sigma > 0 else -residue)
        tails = {}
        for j in range(e.a.v, -1):
            c = e.a.coeff(j) - induced.get(j, 0)
            if not _is_zero(c):
                tails[j] = c
        data[P] = (tails, logs)
    return data


def _is_zero(c):
    try:
        if c == 0:
            return True
    except TypeError:
        return False
    return nabs(c) < 1e-11


# ----------------------------------------------------------------------
# principal-value integrals
# ----------------------------------------------------------------------

def pv_integral(omega: Differential, cover: CoverG0, frm, to, l=0, prec=53,
                nterms=DEFAULT_TERMS, nodes=32, p0=None):
    """p.v. of int lambda^l * omega between two points.

    ``frm`` may be None (the base point P0), a regular point, or a marked
    point; marked endpoints are regularized by subtracting the divergent part
    in the canonical local parameter.  Marked-to-marked integrals run through
    the base point.
    """
    if frm is not None and _is_marked(cover, frm):
        anchor = complex(p0) if p0 is not None else base_point(cover)
        leg2 = pv_integral(omega, cover, anchor, to, l, prec, nterms, nodes)
        leg1 = _pv_from_regular_start(omega, cover, anchor, frm, l, nterms, nodes)
        return leg2 - leg1
    if frm is None:
        frm = p0 if p0 is not None else base_point(cover)
    if to != INF and not _is_marked(cover, to):
        # both endpoints regular: a plain branch-tracked contour integral
        gammas = [complex(g) for g in omega.log_points()]
        sing = [complex(p) for p in cover.finite_marked_points()]
        lamf = cover.rational()

        def f(z, logs):
            val = omega.value_at(z, cover, logs)
            if l:
                lam = lamf(z)
                val = val * (lam ** l if l > 0 else 1 / lam ** (-l))
            return val

        path = TrackedPath(complex(frm), complex(to), singularities=sing,
                           gammas=gammas)
        value, _ = path.integrate(f, nodes=nodes)
        return value
    return _pv_from_regular_start(omega, cover, complex(frm), to, l, nterms, nodes)


def _is_marked(cover, p):
    if p == INF:
        return cover.has_infinite_pole()
    return any(_close(loc, p) for loc in cover.marked_points() if loc != INF)


def _local_scale_points(cover: CoverG0):
    """Finite marked points plus critical points of lambda (handoff radii)."""
    pts = [complex(p) for p in cover.finite_marked_points()]
    try:
        for r, _ in poly_roots(cover.dlambda_numerator(), tol=1e-10):
            pts.append(complex(as_complex(r)))
    except Exception:
        pass
    return pts


def _pv_from_regular_start(omega: Differential, cover: CoverG0, z0, point, l,
                           nterms, nodes, branch_ref=None, ref_key=None):
    """p.v. int_{z0}^{point} lambda^l omega with endpoint regularization.

    ``branch_ref``: mutable dict pinning the 2 pi i branch of the log W
    constant at each endpoint across a family of nearby covers (stencils,
    continuation grids); keyed by ``ref_key``.
    """
    nterms = max(nterms, 24)
    gammas = [complex(g) for g in omega.log_points()]
    sing = [complex(p) for p in cover.finite_marked_points()]
    scale_pts = _local_scale_points(cover)
    tracked = list(gammas)
    lamf = cover.rational()

    def f(z, logs):
        val = omega.value_at(z, cover, logs)
        if l:
            lam = lamf(z)
            val = val * (lam ** l if l > 0 else 1 / lam ** (-l))
        return val

    if point == INF:
        if not any(abs(g) < 1e-14 for g in tracked):
            tracked.append(0j)
    else:
        pc = complex(point)
        if not any(abs(g - pc) < 1e-12 for g in tracked):
            tracked.append(pc)
    fr = PointFrame(cover, point, nterms)
    e = expand_at(omega, cover, point, nterms, frame=fr)
    shift = fr.m_signed * l
    shifted = type(e)(e.a.shift(shift), e.b.shift(shift))
    F = integrate_loglaurent(shifted)

    def _start_logs():
        marked = cover.marked_points()
        out = {}
        for g in tracked:
            val = stable_nlog(complex(z0) - g)
            if branch_ref is not None:
                idx = next((i for i, mp in enumerate(marked)
                            if mp != INF and abs(complex(mp) - g) < 1e-10 * (1 + abs(g))),
                           "origin")
                key = ("start", idx)
                ref = branch_ref.setdefault(key, val)
                val = val - TWO_PI_I * round(((val - ref) / TWO_PI_I).real)
            out[g] = val
        return out

    last_err = None
    for attempt in range(6):
        frac = 6.0 * 2 ** attempt
        if point == INF:
            radius = frac * max([abs(s) for s in scale_pts] + [abs(z0), 1.0])
            z_h = _far_anchor(z0, sing, radius)
        else:
            pc = complex(point)
            rho = min([abs(pc - s) for s in scale_pts if abs(pc - s) > 1e-12]
                      + [abs(pc - z0)])
            delta = rho / frac
            z_h = pc + delta * (z0 - pc) / abs(z0 - pc)
        path = TrackedPath(z0, z_h, singularities=sing, gammas=tracked,
                           endpoint_exclude=[z0])
        numeric, end_logs = path.integrate(f, nodes=nodes,
                                           start_logs=_start_logs())
        tau_h = complex(fr.tau_at(z_h))
        logw_eval = complex(fr.log_w_series().eval(tau_h))
        if branch_ref is not None and ref_key is not None:
            logw0 = complex(stable_nlog(fr.w_unit.coeffs[0]))
            ref = branch_ref.setdefault(ref_key, logw0)
            snap = TWO_PI_I * round(((logw0 - ref) / TWO_PI_I).real)
            logw_eval -= snap
        if point == INF:
            key = _find_key(end_logs, 0j)
            log_tau_h = -end_logs[key] - logw_eval
        else:
            key = _find_key(end_logs, complex(point))
            log_tau_h = end_logs[key] - logw_eval
        last_err = abs(cmath.exp(log_tau_h) - tau_h) / (1 + abs(tau_h))
        if last_err < 1e-9:
            value_loc = complex(F.eval(tau_h, log_tau_h))
            value_loc += _branch_corrections(omega, fr, end_logs, tau_h,
                                             log_tau_h, l)
            # half-residue endpoint term from collapsing the contour onto the
            # cut (the tau^{-1} coefficient of lambda^l omega at the endpoint)
            resid = 0
            if shifted.a.v <= -1 < shifted.a.order:
                resid = complex(as_complex(shifted.a.coeff(-1)))
            if not shifted.b.is_zero() and shifted.b.v <= -1 < shifted.b.order \
                    and abs(complex(as_complex(shifted.b.coeff(-1)))) > 1e-10:
                raise NotRational("log-squared residue at a p.v. endpoint")
            side = HALF_RESIDUE_SIGN_POLE if (point == INF or not any(
                _close(loc, point) for loc, _ in cover.zeros)) else HALF_RESIDUE_SIGN_ZERO
            return numeric - value_loc + side * 1j * math.pi * resid
    raise DivergentPairing(
        f"branch handoff failed at endpoint {point} (residual {last_err:.2e})")


def _far_anchor(z0, sing, radius):
    """Continuous-in-moduli anchor direction: away from the singularity centroid."""
    centroid = sum(sing) / len(sing) if sing else 0j
    d = z0 - centroid
    u = d / abs(d) if abs(d) > 1e-8 * (1 + abs(centroid)) else 1 + 0j
    return centroid + radius * u


def _branch_corrections(omega, fr, end_logs, tau_h, log_tau_h, l):
    """Difference primitive terms from tracked-vs-principal log branches."""
    corr = 0j
    for t in omega.log_terms:
        if t.k == 0:
            continue  # k = 0 log terms evaluate branch-free (pure d log R)
        pairs = [(t.alpha, 1)]
        if t.beta != INF:
            pairs.append((t.beta, -1))
        for gamma, sgn in pairs:
            gc = complex(gamma)
            key = _find_key(end_logs, gc)
            if key is None:
                continue
            la, lb = _log_series_of_linear(fr, gamma, None)
            loc_val = complex(la.eval(tau_h)) + lb * log_tau_h
            delta = end_logs[key] - loc_val
            if abs(delta) < 1e-9:
                continue
            k_winding = delta / TWO_PI_I
            if abs(k_winding - round(k_winding.real)) > 1e-6:
                raise DivergentPairing(
                    f"log branch mismatch {delta} is not a 2 pi i multiple")
            if t.k == 0:
                continue
            kl = t.k + l
            w = complex(as_complex(t.weight)) * t.k * sgn * delta
            if kl != 0:
                corr += w * (tau_h ** (fr.m_signed * kl)) / kl
            else:
                corr += w * fr.m_signed * log_tau_h
    return corr


def _find_key(end_logs, gc):
    for g in end_logs:
        if abs(g - gc) < 1e-11 * (1 + abs(gc)):
            return g
    return None


# ----------------------------------------------------------------------
# the pairing
# ----------------------------------------------------------------------

def _pole_side_log_weights(omega, cover):
    out = {}
    for loc, _ in cover.poles:
        w = structural_log_weights(omega, cover, loc)
        if any(l != 0 for l in w):
            out[loc] = w
    return out


def pairing(omega1: Differential, omega2: Differential, cover: CoverG0,
            prec=53, p0=None, nterms=None, branch_ref=None, _swapped=False):
    """<O1, O2>: tails of O1 against residues of O2, log weights of O1 against
    p.v. integrals of lambda^l O2 from the base point.

    Values are canonical up to additive constants tied to the base point and
    branch conventions (the moduli derivatives are convention-free).  Pairings
    led by pole-side log weights with l != 0 are evaluated in the swapped
    order (same up to such a constant); if both arguments carry that data the
    pairing is not available at genus 0 in this implementation.
    """
    if not _swapped and _pole_side_log_weights(omega1, cover):
        if _pole_side_log_weights(omega2, cover):
            raise DivergentPairing(
                "pairings led by pole-side log weights with l != 0 on both "
                "sides are not supported")
        return pairing(omega2, omega1, cover, prec=prec, p0=p0, nterms=nterms,
                       branch_ref=branch_ref, _swapped=True)
    data1 = extract_singular_data(omega1, cover)
    max_depth = 2
    for tails, _ in data1.values():
        for j in tails:
            max_depth = max(max_depth, -j)
    nt = nterms or max(DEFAULT_TERMS, max_depth + 6)
    total = 0
    if p0 is None and any(logs for _, logs in data1.values()):
        p0 = base_point(cover)
    for ip, P in enumerate(cover.marked_points()):
        tails, logs = data1[P]
        sigma = 1 if any(_close(loc, P) for loc, _ in cover.zeros) else -1
        if tails:
            e2 = expand_at(omega2, cover, P, nt)
            for j, bj in tails.items():
                k = j + 1  # tail index in the pairing formula
                need = -2 - j
                if not e2.b.is_zero() and e2.b.v <= need < e2.b.order \
                        and not _is_zero(e2.b.coeff(need)):
                    raise NotRational("residue of tau^k O2 hits a log term")
                res = e2.a.coeff(need)
                total = total + Fraction(-1, k) * bj * res
        for lw, w in logs.items():
            val = _pv_from_regular_start(omega2, cover, complex(p0), P, lw,
                                         nt, 32, branch_ref=branch_ref,
                                         ref_key=("logw0", ip))
            total = total + sigma * w * val
    return total


def verify_pairing_derivative(family1, family2, cover: CoverG0, h=1e-5,
                              prec=53):
    """max_i | d<O1,O2>/du_i - O1(P_i) O2(P_i)/2 | by central differences
    through the root-parametrized family.

    family1/family2: callables cover -> Differential (horizontal families).
    """
    ram = canonical_coordinates(cover)
    o1 = family1(cover)
    o2 = family2(cover)
    p0 = base_point(cover)
    ref = {}
    pairing(o1, o2, cover, branch_ref=ref)  # seed the branch reference
    worst = 0.0
    for i in range(ram.n):
        plus, minus = covers_along_u(cover, ram, i, h)
        vp = pairing(family1(plus), family2(plus), plus,
                     p0=base_point(plus, hint=p0), branch_ref=ref)
        vm = pairing(family1(minus), family2(minus), minus,
                     p0=base_point(minus, hint=p0), branch_ref=ref)
        deriv = (complex(as_complex(vp)) - complex(as_complex(vm))) / (2 * h)
        target = complex(as_complex(pair_eval_at_ramification(o1, o2, i, ram, cover))) / 2
        worst = max(worst, abs(deriv - target))
    return worst
