"""Residues and local Laurent data of rational differentials f(z) dz."""

from __future__ import annotations

from ..errors import NotRational
from .poly import Poly, RationalFunction, as_rational
from .scalars import is_exact, nabs
from .series import LaurentSeries

INF = "inf"


def _valuation(coeffs, scale):
    """Index of first structurally nonzero coefficient."""
    thr = 1e-13 * (scale or 1.0)
    for i, c in enumerate(coeffs):
        if is_exact(c):
            if c != 0:
                return i
        elif nabs(c) > thr:
            return i
    return len(coeffs)


def laurent_at(f, point, nterms=8):
    """Laurent expansion of a rational function at a finite point or INF.

    Returns a LaurentSeries in w, where w = z - point (finite) or w = 1/z (INF).
    """
    f = as_rational(f)
    num, den = f.num, f.den
    if num.is_zero():
        return LaurentSeries.zero(nterms)
    if point == INF:
        dn, dd = num.degree, den.degree
        ncoef = list(reversed(num.coeffs))
        dcoef = list(reversed(den.coeffs))
        # f(1/w) = w^(dd-dn) * rev(num)(w)/rev(den)(w)
        shift = dd - dn
        n_ser = LaurentSeries(0, ncoef, max(len(ncoef), nterms + len(dcoef)))
        d_ser = LaurentSeries(0, dcoef, max(len(dcoef), nterms + len(dcoef)))
    else:
        scale_n = max((nabs(c) for c in num.coeffs), default=0)
        scale_d = max((nabs(c) for c in den.coeffs), default=0)
        depth = nterms + den.degree + 2
        ntay = num.taylor(point, depth)
        dtay = den.taylor(point, depth)
        vn = _valuation(ntay, scale_n * (1 + nabs(point)) ** max(num.degree, 1))
        vd = _valuation(dtay, scale_d * (1 + nabs(point)) ** max(den.degree, 1))
        if vn >= len(ntay):
            return LaurentSeries.zero(nterms)
        n_ser = LaurentSeries(vn, ntay[vn:], depth)
        d_ser = LaurentSeries(vd, dtay[vd:], depth)
        return (n_ser * d_ser.inverse()).truncate(nterms)
    q = n_ser * d_ser.inverse()
    return q.shift(shift).truncate(shift + nterms)


def residue_at(f, point, nterms=None):
    """Residue of the rational differential f(z) dz at ``point`` (or INF).

    At INF this is -[coefficient of 1/z in f], i.e. the residue of the
    pulled-back differential -f(1/w) dw / w**2 at w = 0.
    """
    f = as_rational(f)
    if f.num.is_zero():
        return 0
    if point == INF:
        # need coefficient of w^1 ... expansion of f in w=1/z down to w^1
        ser = laurent_at(f, INF, nterms or (f.den.degree + 4))
        if ser.v < -f.num.degree - 1:
            raise NotRational("unexpected expansion")
        c1 = ser.coeff(1) if ser.order > 1 else 0
        return -c1
    ser = laurent_at(f, point, nterms or 4)
    return ser.coeff(-1) if ser.v <= -1 else 0


def residue_sum_check(f, poles):
    """Sum of residues at supplied finite poles plus infinity (should be 0)."""
    total = residue_at(f, INF)
    for p in poles:
        total = total + residue_at(f, p)
    return total
