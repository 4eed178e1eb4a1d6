"""Horizontal differentials at genus 0: representation, local expansions,
the basis catalog, grading, and kernel bases.

A differential is a rational part f(z) dz plus finitely many terms
c * d(lambda^k * log((z-alpha)/(z-beta))); every singularity sits at a marked
point of the ambient cover.  Local expansions are computed in the canonical
parameter tau = lambda^{1/m} (zeros) or lambda^{-1/n} (poles), in which
lambda = tau^{±m} holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..cover import CoverG0
from ..errors import BadIndex, NotRational, ProfileObstruction, UnsupportedGenus
from ..numcore import INF, LaurentSeries, Poly, RationalFunction, nabs, nlog
from ..numcore.scalars import stable_nlog
from ..numcore.series import LogLaurent, reversion

DEFAULT_TERMS = 14


# ----------------------------------------------------------------------
# representation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LogTerm:
    """c * d(lambda^k * log((z-alpha)/(z-beta))); beta=INF drops that factor."""
    k: int
    weight: object
    alpha: object
    beta: object = INF


@dataclass(frozen=True)
class Differential:
    rational: RationalFunction
    log_terms: tuple = ()
    basis_tag: object = None
    grade: object = None

    def __add__(self, other):
        if not isinstance(other, Differential):
            raise TypeError("can only add differentials")
        return Differential(self.rational + other.rational,
                            self.log_terms + other.log_terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Differential(self.rational * c,
                            tuple(LogTerm(t.k, c * t.weight, t.alpha, t.beta)
                                  for t in self.log_terms),
                            self.basis_tag, self.grade)

    def is_rational(self):
        return not self.log_terms

    def log_points(self):
        pts = []
        for t in self.log_terms:
            for g in (t.alpha, t.beta):
                if g != INF and all(nabs(g - h) > 0 for h in pts):
                    pts.append(g)
        return pts

    def value_at(self, z, cover: CoverG0, logs=None):
        """dz-coefficient at z; ``logs`` maps log base points to branch values."""
        out = self.rational(z)
        if not self.log_terms:
            return out
        lam = cover.lam(z)
        dlam = cover.dlam(z)
        for t in self.log_terms:
            ratio_log = _log_of(z, t.alpha, logs) - (_log_of(z, t.beta, logs)
                                                     if t.beta != INF else 0)
            dlog = (1 / (z - t.alpha)) - (1 / (z - t.beta) if t.beta != INF else 0)
            lam_k = _int_power(lam, t.k)
            if t.k != 0:
                out = out + t.weight * (t.k * _int_power(lam, t.k - 1) * dlam * ratio_log
                                        + lam_k * dlog)
            else:
                out = out + t.weight * dlog
        return out


def _log_of(z, gamma, logs):
    if logs is not None and gamma in logs:
        return logs[gamma]
    return nlog(z - gamma)


def _int_power(x, k):
    if k >= 0:
        return x ** k
    return 1 / x ** (-k)


# ----------------------------------------------------------------------
# local frames and expansions
# ----------------------------------------------------------------------

class PointFrame:
    """Analytic frame at a marked point: series linking w (= z-P or 1/z) and tau."""

    def __init__(self, cover: CoverG0, point, nterms=DEFAULT_TERMS):
        self.cover = cover
        self.point = point
        self.nterms = nterms
        self.m_signed = cover.mult_of(point)  # +m at zeros, -n at poles
        n = nterms
        if point == INF:
            unit = LaurentSeries(0, [cover.leading], n)
            for loc, m in cover.zeros:
                unit = unit * _one_minus_cw(loc, n).pow_int(m)
            for loc, nn in cover.poles:
                if loc != INF:
                    unit = unit * _one_minus_cw(loc, n).pow_int(nn).inverse()
            # lambda = u^{-n_inf} * unit(u), tau = lambda^{-1/n_inf} = u * unit^{-1/n}
            self.unit = unit
            n_inf = -self.m_signed
            self.tau_of_w = LaurentSeries(1, [1], n + 1) * unit.pow_frac(Fraction(-1, n_inf))
        else:
            unit = LaurentSeries(0, [cover.leading], n)
            for loc, m in cover.zeros:
                if not _close(loc, point):
                    unit = unit * LaurentSeries(0, [point - loc, 1], n).pow_int(m)
            for loc, nn in cover.poles:
                if loc != INF and not _close(loc, point):
                    unit = unit * LaurentSeries(0, [point - loc, 1], n).pow_int(nn).inverse()
            self.unit = unit
            self.tau_of_w = LaurentSeries(1, [1], n + 1) * unit.pow_frac(Fraction(1, self.m_signed))
        self.w_of_tau = reversion(self.tau_of_w)
        if point == INF:
            # z = 1/u(tau)
            self.z_of_tau = self.w_of_tau.inverse()
            self.dz_dtau = self.z_of_tau.deriv()
        else:
            self.z_of_tau = self.w_of_tau + LaurentSeries(0, [point], self.w_of_tau.order)
            self.dz_dtau = self.w_of_tau.deriv()
        # W with w = tau * W(tau); log w = log tau + log W
        self.w_unit = self.w_of_tau.shift(-1)

    def log_w_series(self):
        """log(W) + its constant: log w = log tau + (this series incl. constant)."""
        c0 = self.w_unit.coeffs[0]
        return self.w_unit.log_unit() + LaurentSeries.const(stable_nlog(c0), self.w_unit.order)

    def tau_at(self, z):
        w = (1 / z) if self.point == INF else (z - self.point)
        return self.tau_of_w.eval(w)

    def lam_monomial(self, j):
        """lambda^j = tau^{j*m_signed}, exactly."""
        return self.m_signed * j


def _close(a, b):
    if a == INF or b == INF:
        return a == b
    return a == b or nabs(a - b) < 1e-12 * (1 + nabs(a))


def _one_minus_cw(c, n):
    return LaurentSeries(0, [1, -c], n)


def expand_at(diff: Differential, cover: CoverG0, point, nterms=DEFAULT_TERMS,
              log_consts=None, frame=None) -> LogLaurent:
    """dtau-coefficient expansion of ``diff`` at a marked point.

    Returns A(tau) + B(tau) log(tau); log branch constants for factors
    log(z-gamma) analytic at the point default to principal values (or come
    from ``log_consts``).
    """
    fr = frame or PointFrame(cover, point, nterms)
    out_a = _rational_on_frame(diff.rational, fr) * fr.dz_dtau
    out_b = LaurentSeries.zero(out_a.order)
    for t in diff.log_terms:
        a_part, b_part = _log_term_expansion(t, fr, log_consts)
        out_a = out_a + a_part
        out_b = out_b + b_part
    return LogLaurent(out_a, out_b)


def _rational_on_frame(f: RationalFunction, fr: PointFrame) -> LaurentSeries:
    """f(z(tau)) via a valuation-aware Laurent expansion in the affine local
    coordinate composed with w(tau) (robust to cancellation at marked points)."""
    from ..numcore.residues import laurent_at
    if f.num.is_zero():
        return LaurentSeries.zero(fr.w_of_tau.order)
    depth = fr.w_of_tau.known_terms() + f.den.degree + 2
    fw = laurent_at(f, fr.point, depth)
    return fw.compose(fr.w_of_tau)


def _log_series_of_linear(fr: PointFrame, gamma, log_consts):
    """Series (A, B_const) with log(z - gamma) = A(tau) + B_const * log tau."""
    n = fr.w_of_tau.order
    if fr.point == INF:
        u = fr.w_of_tau
        if gamma == INF:
            raise NotRational("log(z - inf) is not a differential datum")
        one = LaurentSeries.const(1, u.order)
        inner = one - u.scale(gamma)
        a = inner.log_unit()  # log(1 - gamma u), constant 0
        logw = fr.log_w_series()
        return a - logw, -1
    if gamma == INF:
        raise NotRational("log(z - inf) is not a differential datum")
    if _close(gamma, fr.point):
        return fr.log_w_series(), 1
    base = fr.point - gamma
    c = _const_log(base, gamma, log_consts)
    w = fr.w_of_tau
    inner = LaurentSeries.const(1, w.order) + w.scale(1 / base)
    return inner.log_unit() + LaurentSeries.const(c, w.order), 0


def _const_log(value, gamma, log_consts):
    if log_consts is not None and gamma in log_consts:
        return log_consts[gamma]
    return stable_nlog(value)


def _log_term_expansion(t: LogTerm, fr: PointFrame, log_consts):
    """Expansion of c d(lambda^k log R) in dtau-coefficients: (A, B) parts."""
    n = fr.w_of_tau.order
    la, lb = _log_series_of_linear(fr, t.alpha, log_consts)
    if t.beta != INF:
        ra, rb = _log_series_of_linear(fr, t.beta, log_consts)
        la, lb = la - ra, lb - rb
    mk = fr.lam_monomial(t.k)
    # d(lambda^k) = mk tau^{mk-1} dtau;      dR/R = d(la + lb log tau)
    dlogR_a = la.deriv() + LaurentSeries(-1, [lb], la.order - 1)
    if t.k == 0:
        return dlogR_a.scale(t.weight), LaurentSeries.zero(dlogR_a.order)
    mono = LaurentSeries(mk - 1, [t.k * fr.m_signed], mk - 1 + n)
    a = mono * la + LaurentSeries(mk, [1], mk + n) * dlogR_a
    b = mono.scale(lb)
    return a.scale(t.weight), b.scale(t.weight)


# ----------------------------------------------------------------------
# basis catalog
# ----------------------------------------------------------------------

KINDS = ("second_zero", "second_pole", "exact_zero", "exact_pole",
         "third_zero", "third_pole", "log_zero", "log_pole")


@dataclass(frozen=True)
class BasisSpec:
    """One element of the genus-0 horizontal basis.

    ``k`` carries the printed superscript with its sign (so exact_zero has
    k <= -1, log_pole any nonzero k, ...); ``idx`` is the marked-point index
    (1-based within zeros or poles); ``sub`` is r or s for second-kind items.
    """
    kind: str
    idx: int
    k: int = 0
    sub: int = 0

    def __str__(self):
        side = "a" if self.kind.endswith("_zero") else "b"
        if self.kind.startswith("second"):
            rs = "r" if side == "a" else "s"
            return f"Omega0[{side}={self.idx},{rs}={self.sub},k={self.k}]"
        if self.kind.startswith("exact"):
            return f"OmegaE[{side}={self.idx},k={self.k}]"
        name = "Phi" if side == "a" else "Psi"
        return f"{name}[{side}={self.idx},k={self.k}]"

    @staticmethod
    def parse(text: str) -> "BasisSpec":
        name, _, rest = text.partition("[")
        rest = rest.rstrip("]")
        fields = {}
        for item in rest.split(","):
            key, _, val = item.partition("=")
            fields[key.strip()] = int(val)
        side = "zero" if "a" in fields else "pole"
        idx = fields.get("a", fields.get("b"))
        k = fields.get("k", 0)
        if name in ("Omega0", "Omega"):
            sub = fields.get("r", fields.get("s", 0))
            if sub:
                return BasisSpec(f"second_{side}", idx, k, sub)
            return BasisSpec(f"exact_{side}", idx, k)
        if name == "OmegaE":
            return BasisSpec(f"exact_{side}", idx, k)
        if name == "Phi":
            return BasisSpec("third_zero" if k == 0 else "log_zero", idx, k)
        if name == "Psi":
            return BasisSpec("third_pole" if k == 0 else "log_pole", idx, k)
        if name in ("sigma", "rho", "omega"):
            raise UnsupportedGenus(f"{name} families require positive genus")
        raise BadIndex(f"cannot parse basis spec {text!r}")


def _check_spec(spec: BasisSpec, cover: CoverG0):
    if spec.kind not in KINDS:
        if spec.kind in ("sigma", "rho", "holomorphic"):
            raise UnsupportedGenus("items 9-11 require positive genus")
        raise BadIndex(f"unknown kind {spec.kind}")
    zeros, poles = cover.zeros, cover.poles
    side_len = len(zeros) if spec.kind.endswith("_zero") else len(poles)
    if spec.kind.startswith("second"):
        if not (1 <= spec.idx <= side_len):
            raise BadIndex(f"index {spec.idx} out of range")
        mult = zeros[spec.idx - 1][1] if spec.kind.endswith("_zero") else poles[spec.idx - 1][1]
        if not (1 <= spec.sub <= mult - 1):
            raise BadIndex(f"sub-index {spec.sub} not in 1..{mult - 1}")
        if spec.kind == "second_zero" and spec.k > 0:
            raise BadIndex("second_zero carries k <= 0")
        if spec.kind == "second_pole" and spec.k < 0:
            raise BadIndex("second_pole carries k >= 0")
        return
    if not (2 <= spec.idx <= side_len):
        raise BadIndex(f"index {spec.idx} must lie in 2..{side_len}")
    if spec.kind.startswith("exact"):
        if spec.kind == "exact_zero" and spec.k > -1:
            raise BadIndex("exact_zero carries k <= -1")
        if spec.kind == "exact_pole" and spec.k < 1:
            raise BadIndex("exact_pole carries k >= 1")
    if spec.kind.startswith("log") and spec.k == 0:
        raise BadIndex("log elements need k != 0 (k = 0 is third kind)")


def grade(spec: BasisSpec, cover: CoverG0 = None) -> Fraction:
    """D_E eigenvalue of the basis element (rational in general)."""
    if spec.kind in ("third_zero", "third_pole"):
        return Fraction(0)
    if spec.kind in ("log_zero", "log_pole", "exact_zero", "exact_pole"):
        return Fraction(spec.k)
    if spec.kind == "second_zero":
        m = cover.zeros[spec.idx - 1][1]
        return Fraction(spec.k) - Fraction(spec.sub, m)
    if spec.kind == "second_pole":
        n = cover.poles[spec.idx - 1][1]
        return Fraction(spec.k) + Fraction(spec.sub, n)
    raise BadIndex(spec.kind)


def kernel_basis(which: str, cover: CoverG0):
    """Genus-0 kernel bases H0 / HT / HTtilde of the sl2 flows (n elements)."""
    K, L = len(cover.zeros), len(cover.poles)
    if which == "H0":
        return ([BasisSpec("third_zero", a) for a in range(2, K + 1)]
                + [BasisSpec("third_pole", b) for b in range(2, L + 1)])
    if which == "HT":
        if any(m != 1 for m in cover.mu):
            raise ProfileObstruction("H_T requires trivial zero profile")
        out = []
        for b, (_, n) in enumerate(cover.poles, start=1):
            out += [BasisSpec("second_pole", b, 0, s) for s in range(1, n)]
        out += [BasisSpec("exact_pole", b, 1) for b in range(2, L + 1)]
        out += [BasisSpec("third_pole", b) for b in range(2, L + 1)]
        return out
    if which == "HTtilde":
        if any(n != 1 for n in cover.nu):
            raise ProfileObstruction("H_Ttilde requires trivial pole profile")
        out = []
        for a, (_, m) in enumerate(cover.zeros, start=1):
            out += [BasisSpec("second_zero", a, 0, r) for r in range(1, m)]
        out += [BasisSpec("exact_zero", a, -1) for a in range(2, K + 1)]
        out += [BasisSpec("third_zero", a) for a in range(2, K + 1)]
        return out
    raise ValueError(f"unknown kernel {which!r}")


def graded_basis(k: int, cover: CoverG0):
    """Basis of the integer-graded space H_k (k != 0): n elements."""
    if k == 0:
        return kernel_basis("H0", cover)
    K, L = len(cover.zeros), len(cover.poles)
    if k > 0:
        return ([BasisSpec("log_zero", a, k) for a in range(2, K + 1)]
                + [BasisSpec("exact_pole", b, k) for b in range(2, L + 1)])
    return ([BasisSpec("exact_zero", a, k) for a in range(2, K + 1)]
            + [BasisSpec("log_pole", b, k) for b in range(2, L + 1)])


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------

def basis_differential(spec, cover: CoverG0, nterms=None) -> Differential:
    """Construct the Lemma-basis element on a genus-0 cover."""
    if isinstance(spec, str):
        spec = BasisSpec.parse(spec)
    _check_spec(spec, cover)
    point, m = _spec_point(spec, cover)
    if spec.kind in ("second_zero", "second_pole"):
        kk = -spec.k if spec.kind == "second_zero" else spec.k
        depth = kk * m + 1 + spec.sub
        rat = _monomial_tail_extraction(cover, point, {-depth: 1},
                                        nterms or (depth + 6))
        return Differential(rat, (), spec, grade(spec, cover))
    if spec.kind in ("exact_zero", "exact_pole"):
        depth = abs(spec.k) * m + 1
        rat = _monomial_tail_extraction(cover, point, {-depth: -abs(spec.k) * m},
                                        nterms or (depth + 6))
        return Differential(rat, (), spec, grade(spec, cover))
    first = cover.zeros[0][0] if spec.kind.endswith("_zero") else cover.poles[0][0]
    if spec.kind in ("third_zero", "third_pole"):
        # residues +1 at the first point, -1 at the idx-th (infinity takes
        # the balancing residue automatically)
        if first == INF:
            rat = -_simple_pole(point)
        elif point == INF:
            rat = _simple_pole(first)
        else:
            rat = _simple_pole(first) - _simple_pole(point)
        return Differential(rat, (), spec, Fraction(0))
    # log elements
    if spec.kind == "log_zero":
        term = LogTerm(spec.k, 1, first, point)
    else:
        # weights -1 at p_1, +1 at p_b on log(z - .)
        if first == INF:
            term = LogTerm(spec.k, 1, point, INF)
        elif point == INF:
            term = LogTerm(spec.k, -1, first, INF)
        else:
            term = LogTerm(spec.k, 1, point, first)
    raw = Differential(RationalFunction(Poly([0]), Poly([1])), (term,))
    correction = RationalFunction(Poly([0]), Poly([1]))
    prescribed = {point, first}
    if spec.k > 0:
        corr_points = [loc for loc, _ in cover.poles if loc not in prescribed]
    else:
        corr_points = [loc for loc, _ in cover.zeros if loc not in prescribed]
    for q in corr_points:
        correction = correction + _principal_part_of(raw, cover, q)
    # at the prescribed points only (1/m) d(lambda^k log lambda) may survive;
    # strip the moduli-dependent Laurent tails that d(lambda^k * analytic)
    # leaves behind (these arise exactly when lambda^k is singular there)
    if (spec.kind == "log_zero" and spec.k < 0) or \
            (spec.kind == "log_pole" and spec.k > 0):
        for q in prescribed:
            correction = correction + _excess_tail_at(raw, cover, q, spec.k)
    return Differential(raw.rational - correction, raw.log_terms, spec,
                        grade(spec, cover))


def _spec_point(spec: BasisSpec, cover: CoverG0):
    if spec.kind.endswith("_zero"):
        loc, m = cover.zeros[spec.idx - 1]
    else:
        loc, m = cover.poles[spec.idx - 1]
    return loc, m


def _simple_pole(p):
    return RationalFunction(Poly([1]), Poly([-p, 1]))


def _tail_to_rational(point, w_tail):
    """sum_{i<=-2} c_i w^i as a rational function of z (w = z-P or 1/z)."""
    if not w_tail:
        return RationalFunction(Poly([0]), Poly([1]))
    if point == INF:
        # g(u) du with principal part sum e_i u^i -> f(z) = -sum e_i z^{-i-2}
        deg = max(-i - 2 for i in w_tail)
        coeffs = [0] * (deg + 1)
        for i, c in w_tail.items():
            coeffs[-i - 2] = -c
        return RationalFunction(Poly(coeffs), Poly([1]))
    depth = max(-i for i in w_tail)
    den = Poly([-point, 1]) ** depth
    num = Poly([0])
    for i, c in w_tail.items():
        num = num + Poly([-point, 1]) ** (depth + i) * c
    return RationalFunction(num, den)


def _monomial_tail_extraction(cover, point, tau_tail, nterms):
    """Rational differential whose tau-tail at ``point`` equals ``tau_tail``
    (coefficients of tau^{j} dtau, j <= -2) and which is regular elsewhere."""
    depth = max(-j for j in tau_tail)
    fr = PointFrame(cover, point, max(nterms, depth + 6))
    tau = fr.tau_of_w
    tau_inv = tau.inverse()
    g = LaurentSeries.zero(tau.order + depth)
    dtau = tau.deriv()
    for j, c in tau_tail.items():
        g = g + tau_inv.pow_int(-j).scale(c)
    g = g * dtau
    w_tail = {}
    for i in range(g.v, 0):
        cc = g.coeff(i)
        if i == -1:
            if nabs(cc) > 1e-9:
                raise NotRational(f"unexpected residue {cc} in tail extraction")
            continue
        if not _is_small_zero(cc):
            w_tail[i] = cc
    return _tail_to_rational(point, w_tail)


def structural_log_weights(omega: Differential, cover: CoverG0, point):
    """{l: weight} of (1/m) d(lambda^l log lambda) pieces at a marked point.

    Zero side: weights are the R coefficients; pole side: the S coefficients.
    l = 0 weights are recovered from residues instead (see the pairing module).
    """
    is_zero_side = any(_close(loc, point) for loc, _ in cover.zeros)
    out = {}
    for t in omega.log_terms:
        if t.k == 0:
            continue
        w = 0
        if point == INF:
            if t.beta == INF:
                w = t.weight  # single log(z-alpha) ~ +(1/n) log lambda at inf
        else:
            if _close(t.alpha, point):
                w = t.weight if is_zero_side else -t.weight
            elif t.beta != INF and _close(t.beta, point):
                w = -t.weight if is_zero_side else t.weight
        if w != 0:
            out[t.k] = out.get(t.k, 0) + w
    return out


def _excess_tail_at(diff: Differential, cover, point, k, nterms=DEFAULT_TERMS):
    """Laurent tail of ``diff`` at one of its own log base points beyond the
    prescribed (1/m) d(lambda^k log lambda) singular behavior."""
    fr = PointFrame(cover, point, nterms + 4)
    e = expand_at(diff, cover, point, nterms + 4, frame=fr)
    # prescribed A-tail: sigma * w * tau^{m k - 1}; w read from the log terms
    sigma = 1 if any(_close(loc, point) for loc, _ in cover.zeros) else -1
    weights = structural_log_weights(diff, cover, point)
    induced = {fr.m_signed * l - 1: sigma * w for l, w in weights.items()}
    dtau_dw = fr.tau_of_w.deriv()
    a_excess = {}
    for j in range(e.a.v, -1):
        c = e.a.coeff(j) - induced.get(j, 0)
        if not _is_small_zero(c):
            a_excess[j] = c
    if not a_excess:
        return RationalFunction(Poly([0]), Poly([1]))
    v = min(a_excess)
    g = LaurentSeries(v, [a_excess.get(j, 0) for j in range(v, 0)], 0 + nterms)
    h = g.compose(fr.tau_of_w) * dtau_dw
    w_tail = {}
    for i in range(h.v, 0):
        cc = h.coeff(i)
        if i == -1:
            if nabs(cc) > 1e-8:
                raise NotRational(f"residue {cc} in excess tail at {point}")
            continue
        if not _is_small_zero(cc):
            w_tail[i] = cc
    return _tail_to_rational(point, w_tail)


def _principal_part_of(diff: Differential, cover, point, nterms=DEFAULT_TERMS):
    """Principal part (as a global rational differential) of ``diff`` at ``point``."""
    fr = PointFrame(cover, point, nterms)
    e = expand_at(diff, cover, point, nterms, frame=fr)
    if not e.b.is_zero() and e.b.v < 0:
        raise NotRational("log-singular principal part cannot be subtracted")
    # convert the dtau tail to a w tail: g(tau) dtau -> h(w) dw
    dtau_dw = fr.tau_of_w.deriv()
    h = e.a.compose(fr.tau_of_w) * dtau_dw
    w_tail = {}
    for i in range(h.v, 0):
        cc = h.coeff(i)
        if i == -1:
            if nabs(cc) > 1e-9:
                raise NotRational(f"residue {cc} in principal part at {point}")
            continue
        if not _is_small_zero(cc):
            w_tail[i] = cc
    return _tail_to_rational(point, w_tail)


def _is_small_zero(c):
    try:
        return c == 0
    except TypeError:
        return False
