"""Root-parametrized families of covers: moduli derivatives without
differentiating through the root finder.

Free parameters are all marked-point locations except the first zero and the
first pole (and the leading coefficient), which pin the Mobius gauge.  The
canonical-coordinate Jacobian du_i/drho_j = (d lambda/d rho_j)(z_i) is exact
because d lambda vanishes at critical points.
"""

from __future__ import annotations

import numpy as np

from .cover import CoverG0, RamificationData, canonical_coordinates
from .numcore import INF, Poly, RationalFunction, as_complex

__all__ = ["root_params", "bump", "dlam_dparam", "u_jacobian",
           "covers_along_u", "dz_critical"]


def root_params(cover: CoverG0):
    """Free location parameters of the gauge-fixed family (n of them).

    The first zero is always pinned; with a pole at infinity the Mobius gauge
    is exhausted by that pin plus the leading coefficient, so every finite
    pole is free; otherwise the first pole is pinned as well.
    """
    params = [("zero", i) for i in range(1, len(cover.zeros))]
    if cover.has_infinite_pole():
        params += [("pole", i) for i in range(len(cover.poles))
                   if cover.poles[i][0] != INF]
    else:
        params += [("pole", i) for i in range(1, len(cover.poles))]
    assert len(params) == cover.n_moduli, \
        f"gauge-fixed family has {len(params)} parameters, expected {cover.n_moduli}"
    return params


def bump(cover: CoverG0, param, dh) -> CoverG0:
    kind, i = param
    if kind == "zero":
        zeros = list(cover.zeros)
        loc, m = zeros[i]
        zeros[i] = (loc + dh, m)
        return CoverG0(tuple(zeros), cover.poles, cover.leading)
    poles = list(cover.poles)
    loc, n = poles[i]
    if loc == INF:
        raise ValueError("cannot bump the pole at infinity")
    poles[i] = (loc + dh, n)
    return CoverG0(cover.zeros, tuple(poles), cover.leading)


def bump_many(cover: CoverG0, params, dhs) -> CoverG0:
    out = cover
    for p, dh in zip(params, dhs):
        if dh != 0:
            out = bump(out, p, dh)
    return out


def dlam_dparam(cover: CoverG0, param) -> RationalFunction:
    """d lambda / d rho at fixed z, as a rational function of z."""
    kind, i = param
    num = cover.numerator()
    den = cover.denominator()
    if kind == "zero":
        loc, m = cover.zeros[i]
        reduced, _ = num.divmod(Poly([-loc, 1]))
        return RationalFunction(reduced * (-m), den)
    loc, n = cover.poles[i]
    return RationalFunction(num * n, den * Poly([-loc, 1]))


def u_jacobian(cover: CoverG0, ram: RamificationData, params=None):
    """Matrix J[i][j] = du_i/drho_j = (dlam/drho_j)(z_i)."""
    params = params or root_params(cover)
    cols = [dlam_dparam(cover, p) for p in params]
    return [[col(z) for col in cols] for z in ram.z]


def covers_along_u(cover: CoverG0, ram: RamificationData, i, h, params=None):
    """Covers displaced by ±h along the canonical direction du_i (central pair)."""
    params = params or root_params(cover)
    j = np.array([[complex(as_complex(x)) for x in row]
                  for row in u_jacobian(cover, ram, params)])
    e = np.zeros(len(params), dtype=complex)
    e[i] = h
    drho = np.linalg.solve(j, e)
    plus = bump_many(cover, params, drho)
    minus = bump_many(cover, params, -drho)
    return plus, minus


def match_ram(cover: CoverG0, ref: RamificationData, tol=1e-9) -> RamificationData:
    """Canonical coordinates of a nearby cover, reordered to track ``ref``."""
    ram = canonical_coordinates(cover, tol=tol)
    used = set()
    order = []
    for u0 in ref.u:
        best, bestd = None, None
        for j, u in enumerate(ram.u):
            if j in used:
                continue
            d = abs(complex(as_complex(u)) - complex(as_complex(u0)))
            if bestd is None or d < bestd:
                best, bestd = j, d
        used.add(best)
        order.append(best)
    return RamificationData(tuple(ram.z[j] for j in order),
                            tuple(ram.u[j] for j in order),
                            tuple(ram.lpp[j] for j in order), ram.ordering)


def fd_along_u(cover: CoverG0, ram: RamificationData, i, h, func, order2=False):
    """Central difference of func(cover', ram') along the canonical direction u_i.

    ``func`` receives the displaced cover and its order-matched ramification
    data.  With order2=True a five-point second-derivative stencil value
    f(+) - 2 f(0) + f(-) over h^2 is returned instead.
    """
    plus, minus = covers_along_u(cover, ram, i, h)
    fp = func(plus, match_ram(plus, ram))
    fm = func(minus, match_ram(minus, ram))
    if order2:
        f0 = func(cover, ram)
        return (fp - 2 * f0 + fm) / (h * h)
    return (fp - fm) / (2 * h)


def dz_critical(cover: CoverG0, ram: RamificationData, param):
    """dz_i/drho: critical points move by -(d lambda'/d rho)/(lambda'') at z_i."""
    dl = dlam_dparam(cover, param)
    dl_prime = dl.deriv()
    return [-dl_prime(z) / lpp for z, lpp in zip(ram.z, ram.lpp)]
