"""Scalar layer: exact rationals / Gaussian rationals and precision-tagged complex numbers.

Exact scalars are ``int``, ``fractions.Fraction`` and :class:`GaussianRational`.
Numeric scalars are python ``complex`` (53-bit) or ``mpmath.mpc`` (higher
precision).  Mixed exact/numeric arithmetic promotes the exact operand.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath

SUPPORTED_PRECISIONS = (53, 113, 200)


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    # -- conversions -------------------------------------------------
    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # -- arithmetic --------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return GaussianRational(1, 0) / self ** (-n)
        out = GaussianRational(1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))


EXACT_TYPES = (int, Fraction, GaussianRational)


def is_exact(x):
    return isinstance(x, EXACT_TYPES)


def gaussian(x):
    """Coerce an exact scalar to :class:`GaussianRational`."""
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(Fraction(x), 0)


def re_im(x):
    """Real/imaginary parts of any supported scalar as floats."""
    if isinstance(x, GaussianRational):
        return float(x.re), float(x.im)
    if isinstance(x, (int, Fraction, float)):
        return float(x), 0.0
    if isinstance(x, complex):
        return x.real, x.imag
    return float(mpmath.re(x)), float(mpmath.im(x))


def as_complex(x, prec=53):
    """Convert to a numeric complex scalar at ``prec`` bits."""
    if prec <= 53:
        if isinstance(x, complex):
            return x
        if isinstance(x, GaussianRational):
            return complex(x)
        if isinstance(x, (int, float, Fraction)):
            return complex(x)
        return complex(mpmath.mpc(x))
    with mpmath.workprec(prec):
        if isinstance(x, GaussianRational):
            return mpmath.mpc(mpmath.mpf(x.re.numerator) / x.re.denominator,
                              mpmath.mpf(x.im.numerator) / x.im.denominator)
        if isinstance(x, Fraction):
            return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
        return mpmath.mpc(x)


def is_mp(x):
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def zero_like(x):
    return mpmath.mpc(0) if is_mp(x) else (Fraction(0) if is_exact(x) else 0j)


# -- numeric elementary functions dispatching on representation ------

def nabs(x):
    if is_exact(x):
        r, i = re_im(x)
        return math.hypot(r, i)
    if is_mp(x):
        return mpmath.fabs(x)
    return abs(x)


def nsqrt(x):
    return mpmath.sqrt(x) if is_mp(x) else cmath.sqrt(as_complex(x))


def nexp(x):
    return mpmath.exp(x) if is_mp(x) else cmath.exp(as_complex(x))


def nlog(x):
    """Principal branch logarithm."""
    return mpmath.log(x) if is_mp(x) else cmath.log(as_complex(x))


def stable_nlog(x):
    """Principal log with noise-level imaginary parts clamped to +0.0.

    Near the negative real axis the principal branch flips sign with the sign
    bit of an infinitesimal imaginary part; branch constants anchored at base
    points must not depend on such noise.
    """
    if is_mp(x):
        r, i = float(mpmath.re(x)), float(mpmath.im(x))
        if abs(i) < 1e-18 * abs(r):
            return mpmath.log(mpmath.re(x)) if r > 0 else \
                mpmath.log(-mpmath.re(x)) + mpmath.pi * mpmath.mpc(0, 1)
        return mpmath.log(x)
    c = as_complex(x)
    if abs(c.imag) < 1e-18 * abs(c.real):
        c = complex(c.real, 0.0)
    return cmath.log(c)


def npower(x, q):
    """Principal branch power x**q for rational/real exponent q."""
    if is_exact(x) and isinstance(q, int):
        return gaussian(x) ** q if isinstance(x, GaussianRational) else Fraction(x) ** q
    qq = Fraction(q)
    if is_exact(x):
        g = gaussian(x)
        if g == GaussianRational(1, 0):
            return Fraction(1)
        if qq.denominator == 1:
            out = g ** qq.numerator
            return out.re if out.im == 0 else out
        x = complex(g)
    if is_mp(x):
        return mpmath.power(x, mpmath.mpf(qq.numerator) / qq.denominator)
    return as_complex(x) ** float(qq)


def npi(sample):
    """pi in the numeric representation of ``sample``."""
    return mpmath.pi if is_mp(sample) else math.pi


def two_pi_i(sample):
    return 2j * math.pi if not is_mp(sample) else 2 * mpmath.pi * mpmath.mpc(0, 1)


def binomial_frac(q, j):
    """Generalized binomial coefficient C(q, j) for Fraction q, int j >= 0."""
    q = Fraction(q)
    out = Fraction(1)
    for i in range(j):
        out *= (q - i)
        out /= (i + 1)
    return out
