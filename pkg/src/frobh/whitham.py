"""Whitham-type hierarchy: hamiltonian densities, characteristic speeds,
generalized-hodograph solutions, PDE residual sweeps, and the tau function.

Hodograph equations are solved by damped Newton in the root-parametrized
family (rational Jacobians); canonical coordinates are derived outputs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cover import CoverG0, canonical_coordinates
from .diffbasis import BasisSpec, basis_differential, grade, pairing, base_point
from .errors import NoConvergence, QuasiMomentumDegenerate, ZeroGrade, ChargeNotOne
from .family import bump_many, match_ram, root_params
from .frobenius import QuasiMomentum
from .numcore import as_complex, nabs

__all__ = ["FlowTerm", "FlowSpec", "HodographState", "hamiltonian_density",
           "characteristic_speeds", "hodograph_residual", "hodograph_solve",
           "equalize_speeds", "pde_residual", "flow_commutation_residual",
           "tau_function", "graded_rank_check"]


@dataclass(frozen=True)
class FlowTerm:
    spec: BasisSpec
    coeff: complex


@dataclass(frozen=True)
class FlowSpec:
    """Finite combination sum_a T~^{a,k} psi_{a,k} of graded basis elements."""
    terms: tuple

    def __post_init__(self):
        for t in self.terms:
            if t.spec.kind in ("third_zero", "third_pole"):
                raise ZeroGrade("grade-0 elements are Casimir densities; excluded")


@dataclass
class HodographState:
    cover: CoverG0
    ram: object
    residual: float
    iterations: int


def hamiltonian_density(phi: QuasiMomentum, spec: BasisSpec, cover: CoverG0,
                        branch_ref=None, p0=None):
    """h_{a,k} = (1/k) <phi, psi_{a,k}> for a graded basis element."""
    k = grade(spec, cover)
    if k == 0:
        raise ZeroGrade("k = 0 densities are Casimirs of the bracket")
    om = basis_differential(spec, cover)
    val = pairing(phi.builder(cover), om, cover, branch_ref=branch_ref, p0=p0)
    return val / k if not isinstance(val, complex) else val / complex(k)


def _ram_values(diff, cover, ram):
    return [diff.value_at(z, cover) for z in ram.z]


def characteristic_speeds(phi: QuasiMomentum, omega, cover: CoverG0, ram=None):
    """v_i = (D_E Omega)(P_i)/phi(P_i) = k Omega(P_i)/phi(P_i), branch-free."""
    ram = ram or canonical_coordinates(cover)
    k = omega.grade if omega.grade is not None else Fraction(0)
    fphi = phi.values_at_ram(cover, ram)
    fom = _ram_values(omega, cover, ram)
    kk = complex(float(Fraction(k).numerator) / Fraction(k).denominator, 0)
    return [kk * complex(as_complex(a)) / complex(as_complex(b))
            for a, b in zip(fom, fphi)]


def hodograph_residual(phi: QuasiMomentum, flow: FlowSpec, X, cover: CoverG0,
                       ram=None):
    """Residual vector of sum T~ psi_{a,k}(P_i) + X phi(P_i) = 0, as the
    branch-free ratios against phi(P_i)."""
    ram = ram or canonical_coordinates(cover)
    fphi = phi.values_at_ram(cover, ram)
    out = np.full(ram.n, complex(X), dtype=complex)
    for term in flow.terms:
        om = basis_differential(term.spec, cover)
        vals = _ram_values(om, cover, ram)
        for i in range(ram.n):
            out[i] += complex(term.coeff) * complex(as_complex(vals[i])) \
                / complex(as_complex(fphi[i]))
    return out, ram


def hodograph_solve(phi: QuasiMomentum, flow: FlowSpec, X, guess: CoverG0,
                    tol=1e-10, max_iter=50, fd_h=1e-7,
                    ram_ref=None) -> HodographState:
    """Damped Newton for the hodograph equations in root coordinates.

    ``ram_ref`` pins the ordering of canonical coordinates across warm-started
    families (grids, continuation runs).
    """
    if not flow.terms and complex(X) == 0:
        ram = canonical_coordinates(guess) if ram_ref is None \
            else match_ram(guess, ram_ref)
        return HodographState(guess, ram, 0.0, 0)
    cover = guess
    params = root_params(cover)
    ram = canonical_coordinates(cover) if ram_ref is None \
        else match_ram(cover, ram_ref)
    res, ram = hodograph_residual(phi, flow, X, cover, ram)
    rnorm = float(np.max(np.abs(res)))
    for it in range(1, max_iter + 1):
        if rnorm < tol:
            return HodographState(cover, ram, rnorm, it - 1)
        n = len(params)
        jac = np.zeros((ram.n, n), dtype=complex)
        for j in range(n):
            dh = [fd_h if jj == j else 0 for jj in range(n)]
            cp = bump_many(cover, params, dh)
            cm = bump_many(cover, params, [-d for d in dh])
            rp, _ = hodograph_residual(phi, flow, X, cp, match_ram(cp, ram))
            rm, _ = hodograph_residual(phi, flow, X, cm, match_ram(cm, ram))
            jac[:, j] = (rp - rm) / (2 * fd_h)
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            raise NoConvergence("singular hodograph Jacobian")
        damp = 1.0
        for _ in range(12):
            cand = bump_many(cover, params, damp * step)
            try:
                ram_c = match_ram(cand, ram)
                res_c, _ = hodograph_residual(phi, flow, X, cand, ram_c)
            except Exception:
                damp /= 2
                continue
            if float(np.max(np.abs(res_c))) < rnorm or damp < 1e-3:
                cover, ram, res = cand, ram_c, res_c
                rnorm = float(np.max(np.abs(res_c)))
                break
            damp /= 2
        else:
            raise NoConvergence("hodograph Newton stalled while damping")
    if rnorm < tol:
        return HodographState(cover, ram, rnorm, max_iter)
    raise NoConvergence(f"hodograph Newton residual {rnorm:.2e} after {max_iter} iters")


def equalize_speeds(phi: QuasiMomentum, spec: BasisSpec, guess: CoverG0,
                    s_target=None, tol=1e-11, max_iter=60, fd_h=1e-7):
    """Move the moduli to a point where all ratios psi(P_i)/phi(P_i) equal
    s_target (default: their mean at the guess).  Seeds hodograph sweeps."""
    cover = guess
    params = root_params(cover)

    def ratios(cov, rm):
        om = basis_differential(spec, cov)
        f1 = _ram_values(om, cov, rm)
        f2 = phi.values_at_ram(cov, rm)
        return np.array([complex(as_complex(a)) / complex(as_complex(b))
                         for a, b in zip(f1, f2)])

    ram = canonical_coordinates(cover)
    r = ratios(cover, ram)
    s = complex(s_target) if s_target is not None else complex(np.mean(r))

    def eqs(cov, rm):
        return ratios(cov, rm) - s

    res = eqs(cover, ram)
    rnorm = float(np.max(np.abs(res)))
    for it in range(max_iter):
        if rnorm < tol:
            return cover, s
        jac = np.zeros((ram.n, len(params)), dtype=complex)
        for j in range(len(params)):
            dh = [fd_h if jj == j else 0 for jj in range(len(params))]
            cp = bump_many(cover, params, dh)
            cm = bump_many(cover, params, [-d for d in dh])
            jac[:, j] = (eqs(cp, match_ram(cp, ram)) - eqs(cm, match_ram(cm, ram))) / (2 * fd_h)
        step = np.linalg.solve(jac, -res)
        damp = 1.0
        while damp > 1e-4:
            cand = bump_many(cover, params, damp * step)
            try:
                ram_c = match_ram(cand, ram)
                res_c = eqs(cand, ram_c)
            except Exception:
                damp /= 2
                continue
            if float(np.max(np.abs(res_c))) < rnorm:
                cover, ram, res = cand, ram_c, res_c
                rnorm = float(np.max(np.abs(res_c)))
                break
            damp /= 2
        else:
            break
    if rnorm < tol:
        return cover, s
    raise NoConvergence(f"speed equalization residual {rnorm:.2e}")


def solve_grid(phi: QuasiMomentum, flows, X_vals, T_vals, guess: CoverG0,
               tol=1e-10):
    """Hodograph states over a grid; flows(T) -> FlowSpec. Row-wise warm starts."""
    states = {}
    row_guess = guess
    ref = canonical_coordinates(guess)
    for it, T in enumerate(T_vals):
        g = row_guess
        for ix, X in enumerate(X_vals):
            st = hodograph_solve(phi, flows(T), X, g, tol=tol, ram_ref=ref)
            states[(ix, it)] = st
            g = st.cover
            if ix == 0:
                row_guess = st.cover
    return states


def _u_array(st):
    return np.array([complex(as_complex(u)) for u in st.ram.u])


def pde_residual(phi: QuasiMomentum, active_spec: BasisSpec, flows, X_vals,
                 T_vals, guess: CoverG0, tol=1e-10):
    """max over interior grid points of |d_T u_i - v_i d_X u_i| where v_i are
    the active flow's characteristic speeds psi(P_i)/phi(P_i)."""
    states = solve_grid(phi, flows, X_vals, T_vals, guess, tol=tol)
    nx, nt = len(X_vals), len(T_vals)
    dX = complex(X_vals[1] - X_vals[0])
    dT = complex(T_vals[1] - T_vals[0])

    def d4(u_m2, u_m1, u_p1, u_p2, h):
        return (u_m2 - 8 * u_m1 + 8 * u_p1 - u_p2) / (12 * h)

    worst = 0.0
    for ix in range(2, nx - 2):
        for it in range(2, nt - 2):
            st = states[(ix, it)]
            om = basis_differential(active_spec, st.cover)
            fpsi = _ram_values(om, st.cover, st.ram)
            fphi = phi.values_at_ram(st.cover, st.ram)
            v = np.array([complex(as_complex(a)) / complex(as_complex(b))
                          for a, b in zip(fpsi, fphi)])
            du_dT = d4(_u_array(states[(ix, it - 2)]), _u_array(states[(ix, it - 1)]),
                       _u_array(states[(ix, it + 1)]), _u_array(states[(ix, it + 2)]), dT)
            du_dX = d4(_u_array(states[(ix - 2, it)]), _u_array(states[(ix - 1, it)]),
                       _u_array(states[(ix + 1, it)]), _u_array(states[(ix + 2, it)]), dX)
            worst = max(worst, float(np.max(np.abs(du_dT - v * du_dX))))
    return worst, states


def flow_commutation_residual(phi, spec1, spec2, flows2d, X, T1_vals, T2_vals,
                              guess, tol=1e-10):
    """Involutivity: d_{T1} (v2 d_X u) vs d_{T2} (v1 d_X u) on a (T1, T2) grid.

    flows2d(T1, T2) -> FlowSpec; the comparison uses the flow representations
    d_{Ti} u = v_i d_X u, so equality of the mixed derivatives is a genuine
    commutation check.
    """
    h1 = complex(T1_vals[1] - T1_vals[0])
    h2 = complex(T2_vals[1] - T2_vals[0])
    hx = abs(h1)

    ref = canonical_coordinates(guess)

    def state(t1, t2, x, g):
        return hodograph_solve(phi, flows2d(t1, t2), x, g, tol=tol, ram_ref=ref)

    g = guess
    worst = 0.0
    t1_mid = T1_vals[len(T1_vals) // 2]
    t2_mid = T2_vals[len(T2_vals) // 2]

    def rhs(spec, t1, t2, g):
        # v_spec * d_X u at (t1, t2, X)
        stp = state(t1, t2, X + hx, g)
        stm = state(t1, t2, X - hx, stp.cover)
        st0 = state(t1, t2, X, stp.cover)
        om = basis_differential(spec, st0.cover)
        fpsi = _ram_values(om, st0.cover, st0.ram)
        fphi = phi.values_at_ram(st0.cover, st0.ram)
        v = np.array([complex(as_complex(a)) / complex(as_complex(b))
                      for a, b in zip(fpsi, fphi)])
        dux = (_u_array(stp) - _u_array(stm)) / (2 * hx)
        return v * dux, st0.cover

    def mixed(step1, step2):
        r2_p, _ = rhs(spec2, t1_mid + step1, t2_mid, guess)
        r2_m, _ = rhs(spec2, t1_mid - step1, t2_mid, guess)
        r1_p, _ = rhs(spec1, t1_mid, t2_mid + step2, guess)
        r1_m, _ = rhs(spec1, t1_mid, t2_mid - step2, guess)
        return ((r2_p - r2_m) / (2 * step1)) - ((r1_p - r1_m) / (2 * step2))

    # one level of Richardson extrapolation on the outer differences
    d_h = mixed(h1.real, h2.real)
    d_h2 = mixed(h1.real / 2, h2.real / 2)
    return float(np.max(np.abs((4 * d_h2 - d_h) / 3)))


def tau_function(phi: QuasiMomentum, flow: FlowSpec, X, state: HodographState,
                 branch_ref=None, p0=None):
    """log tau = 1/2 sum T~T~ <psi,psi> + X sum T~ <phi,psi> + 1/2 X^2 <phi,phi>,
    with pairings evaluated on the hodograph solution."""
    if phi.charge_d is None or Fraction(phi.charge_d) != 1:
        raise ChargeNotOne("tau function requires D_E phi = 0 (charge d = 1)")
    cover = state.cover
    phid = phi.builder(cover)
    oms = [basis_differential(t.spec, cover) for t in flow.terms]
    total = 0j
    for a, ta in enumerate(flow.terms):
        for b, tb in enumerate(flow.terms):
            val = pairing(oms[a], oms[b], cover, branch_ref=branch_ref, p0=p0)
            total += 0.5 * complex(ta.coeff) * complex(tb.coeff) * complex(as_complex(val))
    for a, ta in enumerate(flow.terms):
        val = pairing(phid, oms[a], cover, branch_ref=branch_ref, p0=p0)
        total += complex(X) * complex(ta.coeff) * complex(as_complex(val))
    val = pairing(phid, phid, cover, branch_ref=branch_ref, p0=p0)
    total += 0.5 * complex(X) ** 2 * complex(as_complex(val))
    return total


def graded_rank_check(phi: QuasiMomentum, cover: CoverG0, levels=(1, 2, 3)):
    """Full-rank test of the evaluation matrices psi_{a,k}(P_i)/phi(P_i)."""
    from .diffbasis import graded_basis
    ram = canonical_coordinates(cover)
    fphi = phi.values_at_ram(cover, ram)
    out = {}
    for k in levels:
        specs = graded_basis(k, cover)
        mat = np.zeros((ram.n, len(specs)), dtype=complex)
        for a, spec in enumerate(specs):
            om = basis_differential(spec, cover)
            vals = _ram_values(om, cover, ram)
            mat[:, a] = [complex(as_complex(v)) / complex(as_complex(f))
                         for v, f in zip(vals, fphi)]
        s = np.linalg.svd(mat, compute_uv=False)
        out[k] = {"rank": int(np.sum(s > 1e-9 * s[0])), "n": ram.n,
                  "smin_over_smax": float(s[-1] / s[0])}
    return out
