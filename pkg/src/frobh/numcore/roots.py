"""Polynomial root finding: Aberth-Ehrlich simultaneous iteration with a
companion-matrix fallback, and multiplicity detection by clustering."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import NonConvergence
from .poly import Poly
from .scalars import as_complex, is_mp, nabs

MAX_ITER = 200


def _initial_guesses(coeffs):
    n = len(coeffs) - 1
    # Cauchy-style radius
    lead = abs(coeffs[-1])
    r = 1.0 + max(abs(c) for c in coeffs[:-1]) / lead if lead else 1.0
    r = r ** (1.0 / 1.0)
    return [0.4 * r * cmath.exp(2j * math.pi * (k + 0.25) / n + 0.3j) for k in range(n)]


def aberth_roots(coeffs, tol=1e-14, max_iter=MAX_ITER):
    """All roots of sum coeffs[k] z^k (ascending) by Aberth-Ehrlich iteration.

    Coefficients may be complex or mpmath numbers; iteration runs in the same
    arithmetic. Raises NonConvergence when the iteration cap is hit.
    """
    mp_mode = any(is_mp(c) for c in coeffs)
    if not mp_mode:
        coeffs = [as_complex(c) for c in coeffs]
    p = Poly(coeffs)
    dp = p.deriv()
    n = p.degree
    if n < 1:
        return []
    z = _initial_guesses(p.coeffs)
    if mp_mode:
        import mpmath
        z = [mpmath.mpc(w) for w in z]
    for _ in range(max_iter):
        moved = 0.0
        new = list(z)
        for i in range(n):
            pz = p(z[i])
            dpz = dp(z[i])
            if pz == 0:
                continue
            newton = pz / dpz if dpz != 0 else pz
            s = 0
            for j in range(n):
                if j != i:
                    d = z[i] - z[j]
                    if d == 0:
                        d = tol
                    s = s + 1 / d
            denom = 1 - newton * s
            step = newton / denom if denom != 0 else newton
            new[i] = z[i] - step
            moved = max(moved, float(nabs(step)))
        z = new
        scale = 1.0 + max(float(nabs(w)) for w in z)
        if moved < tol * scale:
            return z
    raise NonConvergence(f"Aberth iteration did not converge in {max_iter} steps")


def companion_roots(coeffs):
    """Companion-matrix eigenvalue roots (the independent oracle route)."""
    c = [complex(as_complex(x)) for x in coeffs]
    return list(np.roots(list(reversed(c))))


def poly_roots(p, tol=1e-12):
    """Roots of ``p`` with multiplicities.

    Parameters
    ----------
    p : Poly or coefficient list (ascending)
    tol : positive float
        Residual tolerance; clustering radius for multiplicities is tol**0.5.

    Returns
    -------
    list of (root, multiplicity), ordered by (Re, Im).
    """
    if isinstance(p, Poly):
        coeffs = p.coeffs
    else:
        coeffs = list(p)
    if len(coeffs) < 2:
        raise ValueError("poly_roots requires degree >= 1")
    try:
        roots = aberth_roots(coeffs, tol=min(tol, 1e-13))
    except NonConvergence:
        roots = companion_roots(coeffs)
    # cluster within tol**0.5
    radius = tol ** 0.5
    roots = sorted(roots, key=lambda w: (round(float(nabs(w)), 12),))
    clusters = []
    for r in roots:
        for cl in clusters:
            if nabs(r - cl[0][0]) < radius * (1 + nabs(r)):
                cl.append((r, 1))
                break
        else:
            clusters.append([(r, 1)])
    out = []
    for cl in clusters:
        m = len(cl)
        center = sum(w for w, _ in cl) / m
        out.append((center, m))
    out.sort(key=lambda rm: (float(as_complex(rm[0]).real) if not is_mp(rm[0]) else float(rm[0].real),
                             float(as_complex(rm[0]).imag) if not is_mp(rm[0]) else float(rm[0].imag)))
    return out
