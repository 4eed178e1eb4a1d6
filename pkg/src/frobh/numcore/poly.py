"""Dense univariate polynomials and rational functions in the cover coordinate z.

Coefficients may be exact (int/Fraction/GaussianRational) or numeric
(complex/mpc); the two kinds interoperate through ordinary arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import is_exact, nabs


def _is_zero(c):
    try:
        return c == 0
    except TypeError:
        return False


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


class Poly:
    """Polynomial with coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots, mults=None, leading=1):
        p = cls([leading])
        mults = mults or [1] * len(roots)
        for r, m in zip(roots, mults):
            for _ in range(m):
                p = p * cls([-r, 1])
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self):
        return not self.coeffs

    def __repr__(self):
        return f"Poly({self.coeffs})"

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.coeffs == other.coeffs

    def __call__(self, z):
        out = 0
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [0] * (n - len(self.coeffs))
        b = other.coeffs + [0] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [0] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d = other.degree
        lead = other.leading
        while len(r) - 1 >= d and r:
            k = len(r) - 1 - d
            c = _div(r[-1], lead)
            q[k] = c
            for j, b in enumerate(other.coeffs):
                r[k + j] = r[k + j] - c * b
            while r and _is_zero(r[-1]):
                r.pop()
        return Poly(q), Poly(r)

    def deriv(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def taylor(self, a, nterms=None):
        """Coefficients of p(a + w) in ascending powers of w (synthetic division)."""
        if nterms is None:
            nterms = len(self.coeffs)
        work = list(self.coeffs)
        out = []
        for _ in range(nterms):
            if not work:
                out.append(0)
                continue
            q = [0] * (len(work) - 1)
            acc = work[-1]
            for i in range(len(work) - 2, -1, -1):
                q[i] = acc
                acc = work[i] + acc * a
            out.append(acc)
            work = q
        return out

    def reversed_coeffs(self, degree=None):
        """Coefficients of z**degree * p(1/z); default degree = deg p."""
        if degree is None:
            degree = self.degree
        c = self.coeffs + [0] * (degree + 1 - len(self.coeffs))
        return Poly(list(reversed(c)))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over exact coefficients (Euclid)."""
    a, b = Poly(list(a.coeffs)), Poly(list(b.coeffs))
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero():
        return a
    lead = a.leading
    return Poly([Fraction(c, 1) / lead if isinstance(c, int) and isinstance(lead, int) else c / lead
                 for c in a.coeffs])


class RationalFunction:
    """Quotient of two polynomials. No automatic gcd cancellation."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.const(num) if not isinstance(num, (list, tuple)) else Poly(num)
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly.const(den) if not isinstance(den, (list, tuple)) else Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __add__(self, other):
        other = as_rational(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-as_rational(other))

    def __rsub__(self, other):
        return (-self) + as_rational(other)

    def __mul__(self, other):
        other = as_rational(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_rational(other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return as_rational(other) / self

    def deriv(self):
        return RationalFunction(self.num.deriv() * self.den - self.num * self.den.deriv(),
                                self.den * self.den)

    def is_zero(self):
        return self.num.is_zero()

    def degree_at_infinity(self):
        """Order of growth at infinity: deg num - deg den."""
        return self.num.degree - self.den.degree


def as_rational(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction(Poly.const(x))


def poly_max_abs(p: Poly):
    return max((nabs(c) for c in p.coeffs), default=0.0)
