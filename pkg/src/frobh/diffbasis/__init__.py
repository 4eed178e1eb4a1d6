"""Horizontal-differential catalog, grading, kernel bases, and the bilinear
pairing on genus-0 double Hurwitz covers."""

from .core import (BasisSpec, Differential, LogTerm, PointFrame,
                   basis_differential, expand_at, grade, graded_basis,
                   kernel_basis)
from .pairing import (base_point, extract_singular_data, pairing, pv_integral,
                      verify_pairing_derivative)

__all__ = [
    "BasisSpec", "Differential", "LogTerm", "PointFrame", "base_point",
    "basis_differential", "expand_at", "extract_singular_data", "grade",
    "graded_basis", "kernel_basis", "pairing", "pv_integral",
    "verify_pairing_derivative",
]
