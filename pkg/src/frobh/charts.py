"""Coordinate charts on moduli of covers: the generic root chart and the two
flat charts of the cubic-symbol example (deg-4 polynomial superpotential)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cover import CoverG0, RamificationData, make_cover
from .errors import DiscriminantHit
from .numcore import INF, Poly, RationalFunction, as_complex, nexp, poly_roots

__all__ = ["ChartMap", "qgd_t_chart", "qgd_p_chart", "qgd_alpha_to_t",
           "qgd_t_to_alpha", "root_chart"]


@dataclass
class ChartMap:
    """A named chart: x -> cover, with d(lambda)/dx_a at fixed z.

    ``lam_poly(x)`` is the superpotential as an exact polynomial/rational
    function of z whenever the chart admits one; ``marked(x)`` lists marked
    point locations (INF included) for residue sweeps.
    """

    name: str
    dim: int
    to_cover: callable
    lam_rational: callable
    dlam_dx: callable
    marked: callable

    def u_jacobian(self, x, ram: RamificationData):
        """du_i/dx_a = (d lambda/d x_a)(z_i); exact since d lambda(z_i) = 0."""
        cols = self.dlam_dx(x)
        return [[col(z) for col in cols] for z in ram.z]


# ----------------------------------------------------------------------
# the deg-4 polynomial example charts
# ----------------------------------------------------------------------

def _is_exact_seq(vals):
    return all(isinstance(v, (int, Fraction)) for v in vals)


def qgd_t_to_alpha(t):
    t1, t2, t3 = t
    two_thirds = Fraction(2, 3) if _is_exact_seq(t) else 2 / 3
    return (-4 * t1,
            4 * t1 * t1 - 2 * t2,
            -(two_thirds * t1 ** 3 - 2 * t2 * t1 + t3))


def qgd_alpha_to_t(alpha):
    a1, a2, a3 = alpha
    if _is_exact_seq(alpha):
        c596, c18, c14, half = (Fraction(5, 96), Fraction(1, 8),
                                Fraction(1, 4), Fraction(1, 2))
    else:
        c596, c18, c14, half = 5 / 96, 0.125, 0.25, 0.5
    return (-c14 * a1,
            c18 * a1 * a1 - half * a2,
            -c596 * a1 ** 3 + c14 * a1 * a2 - a3)


def _qgd_poly_from_t(t):
    t1, t2, t3 = t
    exact = all(isinstance(v, (int, Fraction)) for v in t)
    two_thirds = Fraction(2, 3) if exact else 2 / 3
    return Poly([0, -(two_thirds * t1 ** 3 - 2 * t2 * t1 + t3),
                 4 * t1 * t1 - 2 * t2, -4 * t1, 1])


def qgd_t_chart() -> ChartMap:
    """Flat chart of the first metric: lambda = z^4 - 4 t1 z^3 + (4 t1^2 - 2 t2) z^2
    - (2/3 t1^3 - 2 t2 t1 + t3) z."""

    def to_cover(t):
        lam = _qgd_poly_from_t(t)
        cubic = Poly(lam.coeffs[1:])  # lambda / z
        roots = [r for r, m in poly_roots(cubic) for _ in range(m)]
        if len(roots) != 3:
            raise DiscriminantHit("degenerate t-point")
        return make_cover([(0, 1)] + [(r, 1) for r in roots], [(INF, 4)])

    def lam_rational(t):
        return RationalFunction(_qgd_poly_from_t(t), Poly([1]))

    def dlam_dx(t):
        t1, t2, t3 = t
        exact = all(isinstance(v, (int, Fraction)) for v in t)
        two = Fraction(2) if exact else 2.0
        d1 = Poly([0, -(two * t1 * t1 - 2 * t2), 8 * t1, -4])
        d2 = Poly([0, 2 * t1, -2])
        d3 = Poly([0, -1])
        return [RationalFunction(p, Poly([1])) for p in (d1, d2, d3)]

    def marked(t):
        lam = _qgd_poly_from_t(t)
        cubic = Poly(lam.coeffs[1:])
        return [0] + [r for r, _ in poly_roots(cubic)] + [INF]

    return ChartMap("t", 3, to_cover, lam_rational, dlam_dx, marked)


def qgd_p_chart(prec=53) -> ChartMap:
    """Flat chart of the intersection form: lambda = z (z - e^{p1/4})
    (z - e^{p1/4 + p2}) (z - e^{p1/4 + p3})."""

    def roots_of(p):
        p1, p2, p3 = [as_complex(v, prec) for v in p]
        r2 = nexp(p1 / 4)
        return [r2, r2 * nexp(p2), r2 * nexp(p3)]

    def to_cover(p):
        return make_cover([(0, 1)] + [(r, 1) for r in roots_of(p)], [(INF, 4)])

    def lam_rational(p):
        return RationalFunction(Poly.from_roots([0] + roots_of(p)), Poly([1]))

    def dlam_dx(p):
        r = roots_of(p)
        # d r_j/d p_a: r2 depends on p1 only; r3 on p1,p2; r4 on p1,p3
        dr = [[r[0] / 4, r[1] / 4, r[2] / 4],
              [0, r[1], 0],
              [0, 0, r[2]]]
        full = Poly.from_roots([0] + r)
        out = []
        for a in range(3):
            num = Poly([0])
            for j in range(3):
                if dr[a][j] != 0:
                    cof, _ = full.divmod(Poly([-r[j], 1]))
                    num = num + cof * (-dr[a][j])
            out.append(RationalFunction(num, Poly([1])))
        return out

    def marked(p):
        return [0] + roots_of(p) + [INF]

    return ChartMap("p", 3, to_cover, lam_rational, dlam_dx, marked)


def root_chart(cover: CoverG0) -> ChartMap:
    """Chart by the free marked-point locations of the gauge-fixed family."""
    from .family import bump_many, dlam_dparam, root_params
    params = root_params(cover)

    def state(x):
        deltas = list(x)
        return bump_many(cover, params, deltas)

    def to_cover(x):
        return state(x)

    def lam_rational(x):
        c = state(x)
        return RationalFunction(c.numerator(), c.denominator())

    def dlam_dx(x):
        c = state(x)
        return [dlam_dparam(c, prm) for prm in params]

    def marked(x):
        return state(x).marked_points()

    return ChartMap("roots", len(params), to_cover, lam_rational, dlam_dx, marked)
