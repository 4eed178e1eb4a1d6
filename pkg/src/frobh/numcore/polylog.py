"""Polylogarithms Li_s for s = 0..3 with principal-branch continuation."""

from __future__ import annotations

import cmath
import math

import mpmath

from ..errors import BranchCut
from .scalars import as_complex, is_mp, nabs, nlog

ZETA2 = math.pi ** 2 / 6
ZETA3 = 1.2020569031595942853997381615114  # zeta(3), 53-bit


def _zeta(s, sample):
    if is_mp(sample):
        return mpmath.zeta(s)
    return ZETA2 if s == 2 else ZETA3


def _pi(sample):
    return mpmath.pi if is_mp(sample) else math.pi


def _series(s, x, eps):
    term = x
    out = x
    k = 1
    ax = nabs(x)
    while True:
        k += 1
        term = term * x
        inc = term / k ** s
        out = out + inc
        if nabs(inc) < eps * (1 + nabs(out)) and k > 4:
            break
        if k > 100000:
            break
    return out


def polylog(s, x, side=None, prec=None):
    """Li_s(x) for s in {0, 1, 2, 3}.

    Li_0 and Li_1 are closed forms; Li_2 and Li_3 use the defining series for
    |x| <= 0.9 and the principal-branch inversion formula outside the unit
    disk.  On the cut [1, oo) a ``side`` of '+' or '-' must be chosen,
    otherwise BranchCut is raised.

    Parameters
    ----------
    s : int
    x : scalar (promoted to complex; mpmath input stays mpmath)
    side : optional '+'/'-' cut side for real x >= 1
    """
    if s not in (0, 1, 2, 3):
        raise ValueError("polylog implemented for s in {0,1,2,3}")
    if prec is not None and prec > 53:
        x = as_complex(x, prec)
    elif not is_mp(x):
        x = as_complex(x)
    r, i = (float(mpmath.re(x)), float(mpmath.im(x))) if is_mp(x) else (x.real, x.imag)
    if s == 0:
        return x / (1 - x)
    if i == 0 and r >= 1.0:
        if side is None:
            raise BranchCut("Li_s on the cut [1,oo): pass side='+' or side='-'")
        bump = 1e-30 if side == "+" else -1e-30
        if is_mp(x):
            x = x + mpmath.mpc(0, 1) * mpmath.mpf(2) ** (-mpmath.mp.prec + 4)
            if side == "-":
                x = mpmath.conj(x)
        else:
            x = complex(r, bump)
    if s == 1:
        return -nlog(1 - x)
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 4) if is_mp(x) else 1e-17
    if nabs(x) <= 0.9:
        return _series(s, x, eps)
    if nabs(x) < 1.0 + 1e-12 and nabs(1 - x) > 1e-8:
        # still summable, slower
        return _series(s, x, eps)
    # inversion: principal log(-x)
    lx = nlog(-x)
    pi = _pi(x)
    inv = polylog(s, 1 / x)
    if s == 2:
        return -inv - pi ** 2 / 6 - lx * lx / 2
    # s == 3
    return inv - lx ** 3 / 6 - pi ** 2 / 6 * lx
