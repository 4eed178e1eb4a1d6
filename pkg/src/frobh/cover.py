"""Genus-0 double Hurwitz covers: factored rational superpotentials, canonical
coordinates (critical values), ramification evaluations, and the shift /
scale / inversion flows."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import (CollidingMarkedPoints, DegreeMismatch, DiscriminantHit,
                     NonGeneric, ProfileObstruction, SingularAtRamification)
from .numcore import (INF, GaussianRational, Poly, RationalFunction,
                      as_complex, is_exact, nabs, nexp, poly_roots)

__all__ = ["CoverG0", "RamificationData", "make_cover", "canonical_coordinates",
           "pair_eval_at_ramification", "flow", "cover_to_json", "cover_from_json"]


@dataclass(frozen=True)
class CoverG0:
    """lambda(z) = leading * prod (z - z_a)^{m_a} / prod (z - p_b)^{n_b}.

    At most one pole may sit at infinity (location INF); its order is the
    degree excess of the numerator.
    """

    zeros: tuple
    poles: tuple
    leading: object = 1

    @property
    def mu(self):
        return tuple(m for _, m in self.zeros)

    @property
    def nu(self):
        return tuple(n for _, n in self.poles)

    @property
    def degree(self):
        return sum(self.mu)

    @property
    def n_moduli(self):
        return len(self.zeros) + len(self.poles) - 2

    def marked_points(self):
        return [loc for loc, _ in self.zeros] + [loc for loc, _ in self.poles]

    def finite_marked_points(self):
        return [p for p in self.marked_points() if p != INF]

    def has_infinite_pole(self):
        return any(loc == INF for loc, _ in self.poles)

    def numerator(self):
        return Poly.from_roots([loc for loc, _ in self.zeros],
                               [m for _, m in self.zeros], self.leading)

    def denominator(self):
        fin = [(loc, n) for loc, n in self.poles if loc != INF]
        return Poly.from_roots([loc for loc, _ in fin], [n for _, n in fin], 1)

    def rational(self):
        return RationalFunction(self.numerator(), self.denominator())

    def dlambda_numerator(self):
        """Numerator polynomial of d(lambda)/dz over denominator**2."""
        num, den = self.numerator(), self.denominator()
        return num.deriv() * den - num * den.deriv()

    def lam(self, z):
        return self.numerator()(z) / self.denominator()(z)

    def dlam(self, z):
        den = self.denominator()
        return self.dlambda_numerator()(z) / den(z) ** 2

    def mult_of(self, point):
        """Signed multiplicity of a marked point (+m for zeros, -n for poles)."""
        for loc, m in self.zeros:
            if _same_point(loc, point):
                return m
        for loc, n in self.poles:
            if _same_point(loc, point):
                return -n
        raise KeyError(f"{point} is not a marked point")


def _same_point(a, b):
    if a == INF or b == INF:
        return a == b
    return a == b or nabs(a - b) < 1e-12 * (1 + nabs(a))


def make_cover(zeros, poles, leading=1) -> CoverG0:
    """Validate and build a CoverG0; profiles are read off the data."""
    zeros = tuple((loc, int(m)) for loc, m in zeros)
    poles = tuple((loc, int(n)) for loc, n in poles)
    if any(m < 1 for _, m in zeros) or any(n < 1 for _, n in poles):
        raise DegreeMismatch("multiplicities must be positive")
    if sum(m for _, m in zeros) != sum(n for _, n in poles):
        raise DegreeMismatch(
            f"zero degree {sum(m for _, m in zeros)} != pole degree {sum(n for _, n in poles)}")
    if any(loc == INF for loc, _ in zeros):
        raise CollidingMarkedPoints("zeros must be finite; put a pole at infinity instead")
    if sum(1 for loc, _ in poles if loc == INF) > 1:
        raise CollidingMarkedPoints("at most one pole at infinity")
    pts = [loc for loc, _ in zeros] + [loc for loc, _ in poles]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if _same_point(pts[i], pts[j]):
                raise CollidingMarkedPoints(f"marked points {pts[i]} and {pts[j]} collide")
    if leading == 0:
        raise DegreeMismatch("leading coefficient must be nonzero")
    return CoverG0(zeros, poles, leading)


@dataclass(frozen=True)
class RamificationData:
    """Critical points z_i, canonical coordinates u_i = lambda(z_i), and
    second derivatives lambda''(z_i), sorted by (Re u, Im u)."""

    z: tuple
    u: tuple
    lpp: tuple
    ordering: str = "lex(Re,Im)"

    @property
    def n(self):
        return len(self.u)


def canonical_coordinates(cover: CoverG0, tol=1e-9) -> RamificationData:
    """Branch points of the cover as canonical coordinates.

    Critical points are the roots of the numerator of d(lambda) away from
    marked points; each must be simple (NonGeneric otherwise), the critical
    values pairwise distinct and nonzero (DiscriminantHit otherwise).
    """
    n_expected = cover.n_moduli
    if n_expected <= 0:
        raise NonGeneric("cover has a zero-dimensional moduli space")
    w = cover.dlambda_numerator()
    if w.degree < 1:
        raise NonGeneric("d(lambda) has no zeros")
    marked = cover.finite_marked_points()
    crit = []
    for root, mult in poly_roots(w, tol=min(tol * tol, 1e-16)):
        if any(nabs(root - as_complex(p)) < tol * (1 + nabs(root)) for p in marked):
            continue
        if mult > 1:
            raise NonGeneric(f"multiple critical point at z={root}")
        crit.append(root)
    if len(crit) != n_expected:
        raise NonGeneric(
            f"found {len(crit)} simple critical points away from marked points, "
            f"expected {n_expected}")
    den = cover.denominator()
    wp = w.deriv()
    zs, us, ls = [], [], []
    for z in crit:
        u = cover.lam(z)
        lpp = wp(z) / den(z) ** 2
        zs.append(z)
        us.append(u)
        ls.append(lpp)
    scale = max(nabs(u) for u in us)
    for i in range(len(us)):
        if nabs(us[i]) < tol * scale:
            raise DiscriminantHit(f"canonical coordinate u_{i} = {us[i]} vanishes")
        for j in range(i + 1, len(us)):
            if nabs(us[i] - us[j]) < tol * scale:
                raise DiscriminantHit(f"canonical coordinates {i},{j} collide")
    order = sorted(range(len(us)), key=lambda i: (float(as_complex(us[i]).real),
                                                  float(as_complex(us[i]).imag)))
    return RamificationData(tuple(zs[i] for i in order),
                            tuple(us[i] for i in order),
                            tuple(ls[i] for i in order))


def pair_eval_at_ramification(omega1, omega2, i, ram: RamificationData, cover: CoverG0):
    """Branch-free product 2 f1(z_i) f2(z_i) / lambda''(z_i) = Omega1(P_i) Omega2(P_i).

    f_j is the dz-coefficient of Omega_j; objects must expose value_at(z, cover).
    """
    z = ram.z[i]
    f1 = omega1.value_at(z, cover)
    f2 = omega2.value_at(z, cover)
    for f in (f1, f2):
        if f != f or nabs(f) > 1e100:
            raise SingularAtRamification(f"differential singular at z_{i} = {z}")
    return 2 * f1 * f2 / ram.lpp[i]


def flow(cover: CoverG0, generator: str, t, root_tol=1e-12) -> CoverG0:
    """Superpotential flows: scale (always), shift (mu trivial), inversion (nu trivial)."""
    if generator == "scale":
        return scale_by(cover, nexp(t))
    if generator == "shift":
        if any(m != 1 for m in cover.mu):
            raise ProfileObstruction("shift flow requires trivial zero profile")
        num = cover.numerator() + cover.denominator() * t
        roots = poly_roots(num, tol=root_tol)
        if any(m != 1 for _, m in roots) or len(roots) != cover.degree:
            raise ProfileObstruction("shifted superpotential left the simple-zero locus")
        return CoverG0(tuple((r, 1) for r, _ in roots), cover.poles, cover.leading)
    if generator == "inversion":
        if any(n != 1 for n in cover.nu):
            raise ProfileObstruction("inversion flow requires trivial pole profile")
        den = cover.denominator() - cover.numerator() * t
        if den.is_zero():
            raise ProfileObstruction("inversion parameter annihilates the denominator")
        roots = poly_roots(den, tol=root_tol) if den.degree >= 1 else []
        if any(m != 1 for _, m in roots):
            raise ProfileObstruction("inversion left the simple-pole locus")
        n_inf = cover.degree - len(roots)
        poles = tuple((r, 1) for r, _ in roots)
        if n_inf == 1:
            poles = poles + ((INF, 1),)
        elif n_inf != 0:
            raise ProfileObstruction("inversion left the simple-pole locus")
        return CoverG0(cover.zeros, poles, cover.leading / den.leading)
    raise ValueError(f"unknown flow generator {generator!r}")


def scale_by(cover: CoverG0, factor) -> CoverG0:
    """lambda -> factor * lambda, exactly."""
    return CoverG0(cover.zeros, cover.poles, cover.leading * factor)


# -- serialization ------------------------------------------------------

def _scalar_to_pair(x):
    if is_exact(x):
        if isinstance(x, GaussianRational):
            return [float(x.re), float(x.im)]
        return [float(x), 0.0]
    c = as_complex(x)
    return [c.real, c.imag]


def cover_to_json(cover: CoverG0) -> str:
    data = {
        "zeros": [[*_scalar_to_pair(loc), m] for loc, m in cover.zeros],
        "poles": ["inf" if loc == INF else [*_scalar_to_pair(loc), n]
                  for loc, n in cover.poles],
        "leading": _scalar_to_pair(cover.leading),
    }
    return json.dumps(data, sort_keys=True)


def cover_from_json(text: str) -> CoverG0:
    data = json.loads(text)
    zeros = [(complex(re, im), int(m)) for re, im, m in data["zeros"]]
    poles = []
    inf_seen = False
    for entry in data["poles"]:
        if entry == "inf":
            inf_seen = True
            continue
        re, im, n = entry
        poles.append((complex(re, im), int(n)))
    if inf_seen:
        n_inf = sum(m for _, m in zeros) - sum(n for _, n in poles)
        poles.append((INF, n_inf))
    lead = complex(*data["leading"])
    if lead.imag == 0 and lead.real == int(lead.real):
        lead = int(lead.real)
    return make_cover(zeros, poles, lead)
