"""Exact rational / high-precision complex arithmetic, polynomial and series
algebra, residues, roots, principal-value path integrals, polylogarithms."""

from .expand import puiseux_expand
from .poly import Poly, RationalFunction, as_rational
from .polylog import polylog
from .residues import INF, laurent_at, residue_at
from .roots import aberth_roots, companion_roots, poly_roots
from .scalars import (EXACT_TYPES, GaussianRational, as_complex, gaussian,
                      is_exact, nabs, nexp, nlog, npower, nsqrt)
from .series import LaurentSeries, LogLaurent, LogPrimitive, PuiseuxSeries

__all__ = [
    "EXACT_TYPES", "GaussianRational", "INF", "LaurentSeries", "LogLaurent",
    "LogPrimitive", "Poly", "PuiseuxSeries", "RationalFunction",
    "aberth_roots", "as_complex", "as_rational", "companion_roots",
    "gaussian", "is_exact", "laurent_at", "nabs", "nexp", "nlog", "npower",
    "nsqrt", "poly_roots", "polylog", "puiseux_expand", "pv_path_integral",
    "residue_at",
]


def pv_path_integral(omega, cover, frm, to, prec=53, **kw):
    """Principal-value path integral of a differential between marked points.

    Thin wrapper over :func:`frobh.diffbasis.pv_integral` (which owns the
    endpoint-subtraction semantics); see there for details.
    """
    from ..diffbasis import pv_integral
    return pv_integral(omega, cover, frm, to, prec=prec, **kw)
