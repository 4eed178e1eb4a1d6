"""Puiseux expansion of rational-function powers at marked points."""

from __future__ import annotations

from fractions import Fraction

from ..errors import IncompatibleRamification
from .poly import as_rational
from .residues import INF, laurent_at
from .series import PuiseuxSeries


def puiseux_expand(lam, exponent, at, order=8):
    """Expand lam**exponent at a point as a Puiseux series in the local coordinate.

    Parameters
    ----------
    lam : Poly or RationalFunction
    exponent : Fraction s/m
    at : finite point or "inf"; the local coordinate is w = z - at (or 1/z)
    order : w-exponent at which the series is truncated

    The local order v of ``lam`` must satisfy v * exponent integral after
    reduction by m, i.e. m divides v (IncompatibleRamification otherwise).
    """
    q = Fraction(exponent)
    lam = as_rational(lam)
    nterms = max(4, int(order) + 8)
    ser = laurent_at(lam, INF if at == INF else at, nterms + 4)
    if ser.is_zero():
        raise ValueError("cannot expand the zero function")
    v = ser.v
    if (v % q.denominator) != 0:
        raise IncompatibleRamification(
            f"local order {v} not divisible by {q.denominator}")
    powered = ser.pow_frac(q)
    base = Fraction(v) * q
    coeffs = list(powered.coeffs)
    n_keep = int(Fraction(order) - base) + 1
    coeffs = coeffs[:max(n_keep, 0)]
    return PuiseuxSeries(base, Fraction(1), coeffs, base + len(coeffs))
