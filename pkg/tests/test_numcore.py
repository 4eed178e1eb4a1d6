"""numcore: roots, residues, Puiseux series, p.v. integrals, polylogarithms."""

import cmath
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from frobh.cover import make_cover
from frobh.diffbasis import Differential, pv_integral
from frobh.errors import BranchCut, IncompatibleRamification
from frobh.numcore import (INF, GaussianRational, Poly, RationalFunction,
                           companion_roots, nabs, poly_roots, polylog,
                           puiseux_expand, residue_at)


def test_roots_symmetric_factorization():
    roots = poly_roots(Poly([-1, 0, 1]))
    vals = sorted(complex(r).real for r, m in roots)
    assert vals == pytest.approx([-1.0, 1.0], abs=1e-13)
    assert all(m == 1 for _, m in roots)


def test_roots_of_unity():
    roots = poly_roots(Poly([-1, 0, 0, 1]))
    assert len(roots) == 3
    for r, m in roots:
        assert m == 1
        assert abs(complex(r) ** 3 - 1) < 1e-12


def test_roots_companion_oracle():
    t1, t2, t3 = Fraction(1, 2), Fraction(1, 3), Fraction(2)
    coeffs = [0, -(Fraction(2, 3) * t1 ** 3 - 2 * t2 * t1 + t3),
              4 * t1 ** 2 - 2 * t2, -4 * t1, 1]
    mine = sorted((complex(r) for r, _ in poly_roots(Poly(coeffs))),
                  key=lambda z: (z.real, z.imag))
    oracle = sorted((complex(r) for r in companion_roots(coeffs)),
                    key=lambda z: (z.real, z.imag))
    for a, b in zip(mine, oracle):
        assert abs(a - b) < 1e-12


def test_roots_multiplicity_clustering():
    p = Poly.from_roots([1, 1, -2], [1, 1, 1])
    out = poly_roots(p, tol=1e-12)
    mults = sorted(m for _, m in out)
    assert mults == [1, 2]


def test_residue_defining():
    assert residue_at(RationalFunction(Poly([1]), Poly([0, 1])), 0) == 1


def test_residue_at_infinity_quartic_root():
    # Res_inf lambda^{1/4} dz/z = -alpha1/4 for lambda = z^4+a1 z^3+a2 z^2+a3 z
    a1, a2, a3 = Fraction(3), Fraction(-2), Fraction(5)
    lam = Poly([0, a3, a2, a1, 1])
    ser = puiseux_expand(lam, Fraction(1, 4), INF, order=4)
    # lambda^{1/4}/z has z^{-1} coefficient = constant term of lambda^{1/4}
    assert -ser.coeff(Fraction(0)) == -a1 / 4


def test_residue_theorem_exact_random():
    rng = random.Random(11)
    for _ in range(50):
        num = Poly([Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                    for _ in range(rng.randint(1, 5))])
        if num.is_zero():
            num = Poly([1])
        poles = []
        den = Poly([1])
        for _ in range(rng.randint(1, 3)):
            p = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            while any(p == q for q in poles):
                p += Fraction(1, 7)
            poles.append(p)
            den = den * Poly([-p, 1]) ** rng.randint(1, 2)
        f = RationalFunction(num, den)
        total = residue_at(f, INF)
        for p in poles:
            total = total + residue_at(f, p)
        assert total == 0


def test_puiseux_monomial():
    ser = puiseux_expand(Poly([0, 0, 0, 0, 1]), Fraction(1, 4), INF, order=3)
    assert ser.terms() == {Fraction(-1): Fraction(1)}


def test_puiseux_binomial_roundtrip():
    a1 = Fraction(2)
    lam = Poly([0, 0, 0, a1, 1])
    ser = puiseux_expand(lam, Fraction(1, 4), INF, order=3)
    assert ser.coeff(Fraction(0)) == a1 / 4
    assert ser.coeff(Fraction(1)) == -3 * a1 ** 2 / 32
    # fourth-power round trip reproduces lambda's expansion
    fourth = ser
    for _ in range(3):
        fourth = fourth * ser
    assert fourth.coeff(Fraction(-4)) == 1
    assert fourth.coeff(Fraction(-3)) == a1
    assert fourth.coeff(Fraction(-2)) == 0


def test_puiseux_incompatible_ramification():
    with pytest.raises(IncompatibleRamification):
        puiseux_expand(Poly([0, 0, 0, 1]), Fraction(1, 2), INF, order=2)


def test_pv_integral_exact_differential():
    # p.v. of an everywhere-regular exact differential dh = h(to) - h(from)
    cover = make_cover([(0, 1), (3.0, 1)], [(INF, 2)])
    omega = Differential(RationalFunction(Poly([0, 2]), Poly([1])))  # d(z^2)
    val = pv_integral(omega, cover, 0.2 + 0.1j, 1.5 - 0.3j)
    expect = (1.5 - 0.3j) ** 2 - (0.2 + 0.1j) ** 2
    assert abs(complex(val) - expect) < 1e-12


def test_pv_integral_log_endpoint():
    # p.v. int of dz/z from the zero z1 = 0 to z2: log z2 plus regularized
    # constants only (checked through a moduli finite difference)
    r = 3.0
    cover = make_cover([(0, 1), (r, 1)], [(INF, 2)])
    phi = Differential(RationalFunction(Poly([1]), Poly([0, 1])))
    v = pv_integral(phi, cover, 0j, complex(r))
    r2 = 3.003
    cover2 = make_cover([(0, 1), (r2, 1)], [(INF, 2)])
    v2 = pv_integral(phi, cover2, 0j, complex(r2))
    # d/dr of (2 log r + const) = 2/r
    deriv = (complex(v2) - complex(v)) / (r2 - r)
    assert abs(deriv - 2 / 3.0015) < 1e-3


def test_pv_integral_quadrature_oracle():
    # lambda dz/z from 0 to 3 for lambda = z(z-3)(z-4)(z-6): the integrand is
    # the polynomial (z-3)(z-4)(z-6); oracle: adaptive quadrature
    cover = make_cover([(0, 1), (3, 1), (4, 1), (6, 1)], [(INF, 4)])
    phi = Differential(RationalFunction(Poly([1]), Poly([0, 1])))
    val = pv_integral(phi, cover, 0j, 3.0 + 0j, l=1)
    oracle = mpmath.quad(lambda z: (z - 3) * (z - 4) * (z - 6), [0, 3])
    assert abs(complex(val) - complex(oracle)) < 1e-12
    assert abs(complex(val) - (-279.0 / 4)) < 1e-12


def test_polylog_closed_forms():
    assert polylog(3, 0) == 0
    x = 0.3 + 0.1j
    assert abs(polylog(0, x) - x / (1 - x)) < 1e-15
    assert abs(polylog(1, x) + cmath.log(1 - x)) < 1e-15


def test_polylog_series_oracle():
    direct = sum(2.0 ** (-k) / k ** 3 for k in range(1, 60))
    assert abs(complex(polylog(3, 0.5)) - direct) < 1e-15


def test_polylog_inversion_vs_mpmath():
    for x in (-2.0, 3.5 + 1.2j, -0.9 + 2.0j):
        mine = complex(polylog(3, x))
        ref = complex(mpmath.polylog(3, x))
        assert abs(mine - ref) < 1e-12
        mine2 = complex(polylog(2, x))
        ref2 = complex(mpmath.polylog(2, x))
        assert abs(mine2 - ref2) < 1e-12


def test_polylog_branch_cut_flag():
    with pytest.raises(BranchCut):
        polylog(3, 2.0)
    up = complex(polylog(3, 2.0, side="+"))
    dn = complex(polylog(3, 2.0, side="-"))
    assert abs(up - dn.conjugate()) < 1e-9


def test_polylog_ladder():
    # d/dp Li_s(e^p) = Li_{s-1}(e^p) for s in {2, 3} at Re p < 0
    rng = random.Random(5)
    h = 1e-6
    for s in (2, 3):
        for _ in range(10):
            p = -0.2 - 2.5 * rng.random() + 1j * (rng.random() - 0.5)
            lhs = (complex(polylog(s, cmath.exp(p + h)))
                   - complex(polylog(s, cmath.exp(p - h)))) / (2 * h)
            rhs = complex(polylog(s - 1, cmath.exp(p)))
            assert abs(lhs - rhs) < 1e-8


def test_trilog_third_derivative():
    # d^3/dp^3 Li3(e^p) = Li0(e^p) at p = -1 (finite differences)
    p, h = -1.0, 1e-2
    f = lambda q: complex(polylog(3, math.e ** q))
    fd = (f(p + 2 * h) - 2 * f(p + h) + 2 * f(p - h) - f(p - 2 * h)) / (2 * h ** 3)
    assert abs(fd - complex(polylog(0, math.exp(p)))) < 1e-8


def test_exact_path_consistency_200bit():
    # exact residues agree with 200-bit numeric evaluation to 1e-40
    rng = random.Random(3)
    with mpmath.workprec(200):
        for _ in range(20):
            num = Poly([Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                        for _ in range(3)] + [Fraction(1)])
            pole = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            den = Poly([-pole, 1]) ** 2
            exact = residue_at(RationalFunction(num, den), pole)
            num_mp = Poly([mpmath.mpf(c.numerator) / c.denominator for c in num.coeffs])
            den_mp = Poly([mpmath.mpf(c.numerator) / c.denominator
                           if isinstance(c, Fraction) else mpmath.mpf(c)
                           for c in den.coeffs])
            approx = residue_at(RationalFunction(num_mp, den_mp),
                                mpmath.mpf(pole.numerator) / pole.denominator)
            diff = abs(mpmath.mpf(exact.numerator) / exact.denominator - approx)
            assert diff < mpmath.mpf(10) ** (-40)


def test_gaussian_rational_field_ops():
    a = GaussianRational(Fraction(1, 2), Fraction(-2, 3))
    b = GaussianRational(3, Fraction(1, 5))
    assert (a * b) / b == a
    assert a + b - b == a
    assert complex(a) == 0.5 - 2 / 3 * 1j
