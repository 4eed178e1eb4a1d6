"""Closed-form prepotentials of the worked examples and their derivatives.

F:     polynomial solution of WDVV for the first structure in the t chart.
Fhat:  almost-dual solution in the p chart (cubic polynomial + trilogarithms).
Fhat_sg: sine-Gordon dual prepotential (1/2) p1^2 p2 + f(p2), with f''' given
in closed form by the elliptic module and lower orders by quadrature.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .numcore import as_complex, nexp, polylog

# monomial exponents (i, j, k) of t1^i t2^j t3^k with coefficient -c
F_QGD_TERMS = {
    (0, 1, 2): Fraction(1, 4),
    (1, 2, 1): Fraction(1, 2),
    (3, 1, 1): Fraction(1, 3),
    (2, 0, 2): Fraction(1, 4),
    (5, 0, 1): Fraction(1, 30),
    (0, 4, 0): Fraction(1, 12),
    (2, 3, 0): Fraction(1, 3),
    (4, 2, 0): Fraction(1, 3),
    (6, 1, 0): Fraction(1, 9),
    (8, 0, 0): Fraction(1, 63),
}

# cubic part of Fhat: exponents (i, j, k) of p1^i p2^j p3^k, coefficient -c
FHAT_CUBIC_TERMS = {
    (3, 0, 0): Fraction(1, 8),
    (2, 1, 0): Fraction(1, 2),
    (2, 0, 1): Fraction(1, 2),
    (1, 2, 0): Fraction(1),
    (1, 1, 1): Fraction(1),
    (1, 0, 2): Fraction(1),
    (0, 2, 1): Fraction(1),
    (0, 3, 0): Fraction(2, 3),
    (0, 1, 2): Fraction(1, 2),
    (0, 0, 3): Fraction(5, 6),
}

# trilogarithm arguments: Li3(e^{L}) with L = sum coeffs * p
FHAT_LI_ARGS = ((0, 1, 0), (0, 0, 1), (0, 1, -1))

EULER_WEIGHTS_T = (Fraction(1, 3), Fraction(2, 3), Fraction(1))
F_QGD_DEGREE = Fraction(8, 3)


def _poly_derive(terms, orders):
    out = {}
    for expo, coeff in terms.items():
        e = list(expo)
        c = coeff
        ok = True
        for axis, times in enumerate(orders):
            for _ in range(times):
                if e[axis] == 0:
                    ok = False
                    break
                c *= e[axis]
                e[axis] -= 1
            if not ok:
                break
        if ok:
            out[tuple(e)] = out.get(tuple(e), 0) + c
    return out


def _poly_eval(terms, x):
    total = 0
    for expo, coeff in terms.items():
        v = coeff
        for xi, ei in zip(x, expo):
            for _ in range(ei):
                v = v * xi
        total = total + v
    return total


def f_qgd(t, orders=(0, 0, 0)):
    """Value (or the requested partial derivative) of the polynomial
    prepotential; exact for exact inputs."""
    return -_poly_eval(_poly_derive(F_QGD_TERMS, orders), t) * 1


def f_qgd_third_tensor(t):
    """c_abc = d^3 F / dt_a dt_b dt_c at t (exact for rational t)."""
    n = 3
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                orders = [0, 0, 0]
                for ax in (a, b, c):
                    orders[ax] += 1
                out[a][b][c] = -_poly_eval(_poly_derive(F_QGD_TERMS, tuple(orders)), t)
    return out


def euler_applied_to_f(t):
    """partial_E F with E = (1/3) t1 d1 + (2/3) t2 d2 + t3 d3 (exact)."""
    total = 0
    for ax in range(3):
        d = _poly_derive(F_QGD_TERMS, tuple(1 if i == ax else 0 for i in range(3)))
        total = total + EULER_WEIGHTS_T[ax] * t[ax] * (-_poly_eval(d, t))
    return total


def fhat_qgd(p, orders=(0, 0, 0), prec=53):
    """Value or partial derivative of the almost-dual prepotential
    (cubic polynomial + Li3(e^{p2}) + Li3(e^{p3}) + Li3(e^{p2-p3}))."""
    cubic = -_poly_eval(_poly_derive(FHAT_CUBIC_TERMS, orders), p)
    total = as_complex(cubic, prec)
    s_target = 3 - sum(orders)
    for arg in FHAT_LI_ARGS:
        chain = 1
        for ax, times in enumerate(orders):
            for _ in range(times):
                chain *= arg[ax]
        if chain == 0:
            continue
        L = sum(c * as_complex(v, prec) for c, v in zip(arg, p))
        x = nexp(L)
        s = 3 - sum(orders)
        if s < 0:
            # d/dL Li_0(e^L) = e^L/(1-e^L)^2; only total order <= 3 supported
            raise ValueError("fhat_qgd supports total derivative order <= 3")
        total = total + chain * polylog(s, x, prec=prec)
    return total


def fhat_qgd_third_tensor(p, prec=53):
    n = 3
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                orders = [0, 0, 0]
                for ax in (a, b, c):
                    orders[ax] += 1
                out[a][b][c] = fhat_qgd(p, tuple(orders), prec=prec)
    return out


def wdvv_points_t(rng, count=5, scale=3):
    """Deterministic rational sample points for the t chart."""
    pts = []
    while len(pts) < count:
        t = tuple(Fraction(rng.randint(-2 * scale, 2 * scale), rng.randint(2, 7))
                  for _ in range(3))
        if all(v != 0 for v in t):
            pts.append(t)
    return pts


def wdvv_points_p(rng, count=5):
    """Sample p points with Re p_a < 0 (inside the polylog series domain)."""
    pts = []
    while len(pts) < count:
        p = tuple(-0.3 - 2.2 * rng.random() + 0.4j * (rng.random() - 0.5)
                  for _ in range(3))
        pts.append(p)
    return pts


def fhat_sg(p1, p2, f3, base=0.25j, nodes=64):
    """Sine-Gordon dual prepotential (1/2) p1^2 p2 + f(p2).

    f is obtained from the supplied third derivative f3(p2) by iterated
    quadrature along the straight segment from ``base``:
    f(p) = (1/2) int_base^p (p - s)^2 f3(s) ds  (the quadratic ambiguity is
    fixed to zero at ``base``).
    """
    import numpy as np
    x, w = np.polynomial.legendre.leggauss(nodes)
    a, b = complex(base), complex(p2)
    half = (b - a) / 2
    mid = (a + b) / 2
    total = 0j
    for xi, wi in zip(x, w):
        spt = mid + half * xi
        total += wi * (b - spt) ** 2 * complex(f3(spt))
    f_val = half * total / 2
    return 0.5 * complex(p1) ** 2 * complex(p2) + f_val
