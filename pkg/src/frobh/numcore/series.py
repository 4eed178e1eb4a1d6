"""Truncated Laurent series (optionally carrying a log tau part) and Puiseux series.

The Laurent engine works in a local coordinate ``tau`` with integer exponents;
fractional exponents only ever enter through the public :class:`PuiseuxSeries`
wrapper, which rescales them to an integer grid.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import IncompatibleRamification
from .scalars import binomial_frac, npower


def _is_zero(c):
    try:
        return c == 0
    except TypeError:
        return False


class LaurentSeries:
    """sum_{j=v}^{order-1} coeffs[j-v] * tau**j, truncated at exponent ``order``."""

    __slots__ = ("v", "coeffs", "order")

    def __init__(self, v, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = v + len(coeffs)
        # strip exactly-zero leading coefficients
        while coeffs and _is_zero(coeffs[0]):
            coeffs.pop(0)
            v += 1
        if not coeffs:
            v = order
        if v + len(coeffs) > order:
            coeffs = coeffs[: order - v]
        self.v = v
        self.coeffs = coeffs
        self.order = order

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, order):
        return cls(order, [], order)

    @classmethod
    def const(cls, c, order):
        return cls(0, [c], order)

    @classmethod
    def tau(cls, order):
        return cls(1, [1], order)

    def __repr__(self):
        return f"LaurentSeries(v={self.v}, coeffs={self.coeffs}, order={self.order})"

    def is_zero(self):
        return not self.coeffs

    def coeff(self, j):
        """Coefficient of tau**j (0 if below truncation; error above)."""
        if j >= self.order:
            raise ValueError(f"coefficient tau^{j} beyond truncation order {self.order}")
        if j < self.v or j - self.v >= len(self.coeffs):
            return 0
        return self.coeffs[j - self.v]

    def known_terms(self):
        return self.order - self.v

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(other, self.order)
        order = min(self.order, other.order)
        v = min(self.v if self.coeffs else order, other.v if other.coeffs else order)
        n = order - v
        out = [0] * max(n, 0)
        for i, c in enumerate(self.coeffs):
            j = self.v + i
            if j < order:
                out[j - v] = out[j - v] + c
        for i, c in enumerate(other.coeffs):
            j = other.v + i
            if j < order:
                out[j - v] = out[j - v] + c
        return LaurentSeries(v, out, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.v, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return LaurentSeries(self.v, [c * a for a in self.coeffs], self.order)

    def shift(self, k):
        """Multiply by tau**k."""
        return LaurentSeries(self.v + k, list(self.coeffs), self.order + k)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                return LaurentSeries.zero(min(self.order + other.order, self.order, other.order))
            a, b = (self, other) if self.is_zero() else (other, self)
            return LaurentSeries.zero(a.order + b.v)
        order = min(self.v + other.order, other.v + self.order)
        v = self.v + other.v
        n = order - v
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= n:
                    break
                out[k] = out[k] + a * b
        return LaurentSeries(v, out, order)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero series")
        c0 = self.coeffs[0]
        n = self.known_terms()
        # unit part 1 + T
        t = [self.coeffs[i] / c0 if not isinstance(self.coeffs[i], int) or not isinstance(c0, int)
             else Fraction(self.coeffs[i], 1) / c0 for i in range(len(self.coeffs))]
        inv = [0] * n
        inv[0] = 1
        for k in range(1, n):
            s = 0
            for j in range(1, min(k, len(t) - 1) + 1):
                s = s + t[j] * inv[k - j]
            inv[k] = -s
        one_over_c0 = Fraction(1, 1) / c0 if isinstance(c0, int) else 1 / c0
        return LaurentSeries(-self.v, [c * one_over_c0 for c in inv], -self.v + n)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(Fraction(1, 1) / other if isinstance(other, int) else 1 / other)
        return self * other.inverse()

    def pow_frac(self, q):
        """Principal-branch power S**q for Fraction q; requires q*v integral."""
        q = Fraction(q)
        if self.is_zero():
            raise ZeroDivisionError("fractional power of zero series")
        if (q * self.v).denominator != 1:
            raise IncompatibleRamification(
                f"exponent {q} incompatible with valuation {self.v}")
        c0 = self.coeffs[0]
        n = self.known_terms()
        t = LaurentSeries(0, [c / c0 if not isinstance(c, int) or not isinstance(c0, int)
                              else Fraction(c, 1) / c0 for c in self.coeffs], n) - 1
        out = LaurentSeries.const(1, n)
        tp = LaurentSeries.const(1, n)
        for j in range(1, n):
            tp = tp * t
            if tp.is_zero():
                break
            out = out + tp.scale(binomial_frac(q, j))
        lead = npower(c0, q)
        return out.scale(lead).shift(int(q * self.v))

    def pow_int(self, n):
        if n < 0:
            return self.inverse().pow_int(-n)
        if n == 0:
            return LaurentSeries(0, [1], self.known_terms())
        acc = self
        for _ in range(n - 1):
            acc = acc * self
        return acc

    def deriv(self):
        return LaurentSeries(self.v - 1,
                             [(self.v + i) * c for i, c in enumerate(self.coeffs)],
                             self.order - 1)

    def log_unit(self):
        """log(unit part) where S = c0 tau^v (1 + T): returns log(1+T) (no c0, no v log tau)."""
        c0 = self.coeffs[0]
        n = self.known_terms()
        t = LaurentSeries(0, [c / c0 if not isinstance(c, int) or not isinstance(c0, int)
                              else Fraction(c, 1) / c0 for c in self.coeffs], n) - 1
        out = LaurentSeries.zero(n)
        tp = LaurentSeries.const(1, n)
        for j in range(1, n):
            tp = tp * t
            if tp.is_zero():
                break
            out = out + tp.scale(Fraction((-1) ** (j + 1), j))
        return out

    def compose(self, u):
        """S(u(sigma)) for a series u with valuation >= 1."""
        if u.v < 1:
            raise ValueError("composition requires inner valuation >= 1")
        if not self.coeffs:
            return LaurentSeries.zero(self.order * u.v)
        if self.v >= 0:
            upow = u.pow_int(self.v) if self.v else LaurentSeries(0, [1], u.known_terms())
        else:
            upow = u.inverse().pow_int(-self.v)
        out = LaurentSeries.zero(upow.v + upow.known_terms())
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                out = out + upow.scale(c)
            if i < len(self.coeffs) - 1:
                upow = upow * u
        return out.truncate(min(out.order, self.order * u.v))

    def eval(self, tau):
        """Numeric evaluation (sums known terms)."""
        out = 0
        tp = tau ** self.v if self.v >= 0 else 1 / tau ** (-self.v)
        for c in self.coeffs:
            out = out + c * tp
            tp = tp * tau
        return out

    def truncate(self, order):
        return LaurentSeries(self.v, self.coeffs[: max(0, order - self.v)], min(order, self.order))


def reversion(s: LaurentSeries) -> LaurentSeries:
    """Inverse series of s (valuation 1): u with s(u(sigma)) = sigma + O(sigma^N)."""
    if s.v != 1:
        raise ValueError("reversion requires valuation exactly 1")
    n = s.order  # everything is known mod tau^n
    c1 = s.coeffs[0]
    inv_c1 = Fraction(1, 1) / c1 if isinstance(c1, int) else 1 / c1
    u = LaurentSeries(1, [inv_c1], 2)
    sigma = LaurentSeries(1, [1], n)
    for _ in range(64):
        if u.order >= n:
            return u.truncate(n)
        m = min(2 * u.order - 1, n)
        u = LaurentSeries(u.v, list(u.coeffs), m)
        su = s.truncate(m).compose(u)
        dsu = s.deriv().truncate(m - 1).compose(u)
        corr = (su - sigma.truncate(su.order)) * dsu.inverse()
        u = (u - corr).truncate(m)
    raise RuntimeError("series reversion failed to reach target order")


class LogLaurent:
    """A(tau) + B(tau)*log(tau) with Laurent A, B."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=None):
        self.a = a
        self.b = b if b is not None else LaurentSeries.zero(a.order)

    def __add__(self, other):
        if isinstance(other, LogLaurent):
            return LogLaurent(self.a + other.a, self.b + other.b)
        return LogLaurent(self.a + other, self.b)

    __radd__ = __add__

    def __neg__(self):
        return LogLaurent(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LogLaurent) else -other)

    def __mul__(self, other):
        if isinstance(other, LogLaurent):
            if not other.b.is_zero() and not self.b.is_zero():
                raise ValueError("log-degree > 1 products are out of scope")
            if other.b.is_zero():
                return LogLaurent(self.a * other.a, self.b * other.a)
            return LogLaurent(self.a * other.a, self.a * other.b)
        return LogLaurent(self.a * other, self.b * other)

    __rmul__ = __mul__

    def scale(self, c):
        return LogLaurent(self.a.scale(c), self.b.scale(c))

    def deriv(self):
        return LogLaurent(self.a.deriv() + self.b.shift(-1), self.b.deriv())

    def coeff(self, j):
        return self.a.coeff(j), self.b.coeff(j)

    def eval(self, tau, log_tau):
        return self.a.eval(tau) + self.b.eval(tau) * log_tau


class LogPrimitive:
    """C(tau) + D(tau)*log(tau) + e*log(tau)**2 / 2, the primitive of a LogLaurent."""

    __slots__ = ("c", "d", "e")

    def __init__(self, c, d, e):
        self.c = c
        self.d = d
        self.e = e

    def eval(self, tau, log_tau):
        return self.c.eval(tau) + self.d.eval(tau) * log_tau + self.e * log_tau ** 2 / 2

    def regularized_at_zero(self):
        """Drop negative powers and logs; value of the analytic part at tau=0."""
        if self.c.v <= 0 and 0 < self.c.order:
            return self.c.coeff(0)
        return 0


def integrate_loglaurent(s: LogLaurent) -> LogPrimitive:
    """Term-wise primitive; no integration constant (analytic part vanishes at 0... plus tau^0 term absent)."""
    c_terms = {}
    d_terms = {}
    e = 0
    for i, cj in enumerate(s.a.coeffs):
        j = s.a.v + i
        if j == -1:
            d_terms[0] = d_terms.get(0, 0) + cj
        else:
            c_terms[j + 1] = c_terms.get(j + 1, 0) + _frac_div(cj, j + 1)
    for i, bj in enumerate(s.b.coeffs):
        j = s.b.v + i
        if j == -1:
            e = e + bj
        else:
            d_terms[j + 1] = d_terms.get(j + 1, 0) + _frac_div(bj, j + 1)
            c_terms[j + 1] = c_terms.get(j + 1, 0) - _frac_div(bj, (j + 1) * (j + 1))
    order = min(s.a.order, s.b.order) + 1

    def build(terms):
        if not terms:
            return LaurentSeries.zero(order)
        v = min(terms)
        coeffs = [terms.get(j, 0) for j in range(v, order)]
        return LaurentSeries(v, coeffs, order)

    return LogPrimitive(build(c_terms), build(d_terms), e)


def _frac_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


class PuiseuxSeries:
    """sum coeffs[i] * x**(base + i*step) with rational base and step > 0."""

    __slots__ = ("base", "step", "coeffs", "trunc")

    def __init__(self, base, step, coeffs, trunc=None):
        self.base = Fraction(base)
        self.step = Fraction(step)
        if self.step <= 0:
            raise ValueError("Puiseux step must be positive")
        self.coeffs = list(coeffs)
        self.trunc = Fraction(trunc) if trunc is not None else self.base + len(self.coeffs) * self.step

    def __repr__(self):
        return (f"PuiseuxSeries(base={self.base}, step={self.step}, "
                f"coeffs={self.coeffs}, trunc={self.trunc})")

    def exponents(self):
        return [self.base + i * self.step for i in range(len(self.coeffs))]

    def coeff(self, exponent):
        e = Fraction(exponent)
        k = (e - self.base) / self.step
        if k.denominator != 1 or k < 0 or k >= len(self.coeffs):
            return 0
        return self.coeffs[int(k)]

    def leading(self):
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return self.base + i * self.step, c
        raise ValueError("zero Puiseux series")

    def terms(self):
        return {self.base + i * self.step: c
                for i, c in enumerate(self.coeffs) if not _is_zero(c)}

    @staticmethod
    def _from_terms(terms, step, trunc):
        if not terms:
            return PuiseuxSeries(trunc, step, [], trunc)
        base = min(terms)
        n = (trunc - base) / step
        coeffs = [terms.get(base + i * step, 0) for i in range(int(n))]
        return PuiseuxSeries(base, step, coeffs, trunc)

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return PuiseuxSeries(self.base, self.step, [c * other for c in self.coeffs], self.trunc)
        from math import gcd
        num = gcd(self.step.numerator * other.step.denominator,
                  other.step.numerator * self.step.denominator)
        den = self.step.denominator * other.step.denominator
        s = Fraction(num, den)
        trunc = min(self.base + other.trunc, other.base + self.trunc)
        terms = {}
        for ea, ca in self.terms().items():
            for eb, cb in other.terms().items():
                e = ea + eb
                if e < trunc:
                    terms[e] = terms.get(e, 0) + ca * cb
        # ensure the grid step divides every exponent gap
        if terms:
            base = min(terms)
            for e in terms:
                g = (e - base) / s
                if g.denominator != 1:
                    s = s / g.denominator
            g = (trunc - base) / s
            if g.denominator != 1:
                s = s / g.denominator
        return PuiseuxSeries._from_terms(terms, s, trunc)

    __rmul__ = __mul__

    def pow_frac(self, q):
        """Principal power S**q; exponents stay on a rational grid."""
        q = Fraction(q)
        e0, c0 = self.leading()
        n = int((self.trunc - e0) / self.step)
        unit = [self.coeff(e0 + i * self.step) for i in range(n)]
        t = [_frac_div(c, c0) for c in unit]
        out = [0] * n
        out[0] = 1
        # (1+T)^q via the recurrence (k out[k] = sum_j ((q+1)j/k - 1) t_j out_{k-j})
        for k in range(1, n):
            s = 0
            for j in range(1, k + 1):
                tj = t[j] if j < len(t) else 0
                if _is_zero(tj):
                    continue
                s = s + (Fraction(j, k) * (q + 1) - 1) * tj * out[k - j]
            out[k] = s
        lead = npower(c0, q)
        return PuiseuxSeries(e0 * q, self.step, [lead * c for c in out],
                             e0 * q + n * self.step)

    def eval(self, x):
        out = 0
        for i, c in enumerate(self.coeffs):
            e = self.base + i * self.step
            out = out + c * npower(x, e)
        return out
