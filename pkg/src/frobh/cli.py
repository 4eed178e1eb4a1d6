"""Command line surface: qgd / sine-gordon / whitham / verify-all."""

from __future__ import annotations

import json
import os
import random
import sys
from fractions import Fraction

import click
import numpy as np

from . import reports
from .charts import qgd_p_chart, qgd_t_chart
from .cover import canonical_coordinates, cover_from_json, make_cover
from .diffbasis import BasisSpec, basis_differential
from .errors import (BranchCollision, DiscriminantHit, FrobhError,
                     NoConvergence, NonGeneric)
from .frobenius import (axiom_check, charge_from_scale_flow, flatness_report,
                        metric, qm_dlog, structure_constants, wdvv_check)
from .numcore import INF, as_complex, nabs
from .prepotentials import (F_QGD_DEGREE, euler_applied_to_f, f_qgd,
                            f_qgd_third_tensor, fhat_qgd_third_tensor,
                            wdvv_points_p, wdvv_points_t)
from .whitham import (FlowSpec, FlowTerm, flow_commutation_residual,
                      hodograph_solve, pde_residual, solve_grid)

ETA_TARGET = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
G_TARGET = [[Fraction(-3, 4), -1, -1], [-1, -2, -1], [-1, -1, -2]]


def _parse_reals(text, n):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise click.BadParameter(f"expected {n} comma-separated values")
    out = []
    for p in parts:
        if "/" in p:
            out.append(Fraction(p))
        else:
            f = float(p)
            out.append(Fraction(p) if f == int(f) and "." not in p else f)
    return tuple(out)


def _parse_complex(text):
    re, im = (float(v) for v in text.split(","))
    return complex(re, im)


def _default_precision():
    env = os.environ.get("FROBH_PRECISION")
    return int(env) if env else 53


@click.group()
def main():
    """Dual-type Frobenius structures on genus-0 double Hurwitz spaces."""


@main.command()
@click.option("--t", "t_text", default=None, help="t-chart point, e.g. 0.5,1/3,2")
@click.option("--p", "p_text", default=None, help="p-chart point (Re p_a < 0)")
@click.option("--precision", default=None, type=int)
@click.option("--tol", default=1e-9, type=float)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, type=click.Path())
def qgd(t_text, p_text, precision, tol, seed, out):
    """Reproduce the polynomial-symbol example: metrics, products,
    prepotentials, WDVV, and axiom verdicts in both flat charts."""
    precision = precision or _default_precision()
    rng = random.Random(seed)
    t = _parse_reals(t_text, 3) if t_text else (Fraction(1, 2), Fraction(1, 3), Fraction(2))
    p = _parse_reals(p_text, 3) if p_text else (-1.0, -2.0, -3.0)
    tc, pc = qgd_t_chart(), qgd_p_chart(precision)
    phi = qm_dlog()
    rep = {"chart_points": {"t": [reports.jnum(v) for v in t],
                            "p": [reports.jnum(v) for v in p]},
           "residuals": {}, "metrics": {}, "axioms": {}, "flatness": {}}
    ok = True
    try:
        cover = tc.to_cover(t)
        ram = canonical_coordinates(cover)
    except (DiscriminantHit, NonGeneric) as exc:
        click.echo(f"degenerate point: {exc}", err=True)
        sys.exit(2)
    try:
        eta = metric("eta", tc, phi, t)
        rep["metrics"]["eta_t"] = reports.jmat(eta.matrix)
        r_eta = max(nabs(eta.matrix[a][b] - ETA_TARGET[a][b])
                    for a in range(3) for b in range(3))
        rep["residuals"]["eta_antidiagonal"] = float(r_eta)
        ok &= r_eta == 0 or r_eta < tol

        g = metric("g", pc, phi, p)
        rep["metrics"]["g_p"] = reports.jmat(g.matrix)
        r_g = max(nabs(g.matrix[a][b] - G_TARGET[a][b])
                  for a in range(3) for b in range(3))
        rep["residuals"]["g_matrix"] = float(r_g)
        ok &= r_g < max(tol, 1e-10)

        ct = structure_constants("dot", tc, phi, t)
        ft = f_qgd_third_tensor(t)
        r_dot = max(nabs(ct.tensor[a][b][c] - ft[a][b][c])
                    for a in range(3) for b in range(3) for c in range(3))
        rep["residuals"]["dot_vs_F"] = float(r_dot)
        ok &= r_dot == 0 or r_dot < tol

        cp = structure_constants("star", pc, phi, p)
        fp = fhat_qgd_third_tensor(p, prec=precision)
        r_star = max(nabs(cp.tensor[a][b][c] - fp[a][b][c])
                     for a in range(3) for b in range(3) for c in range(3))
        rep["residuals"]["star_vs_Fhat"] = float(r_star)
        ok &= r_star < max(tol, 1e-9)

        r_wdvv_f = wdvv_check(f_qgd_third_tensor, ETA_TARGET, wdvv_points_t(rng, 3))
        r_wdvv_fh = wdvv_check(lambda x: fhat_qgd_third_tensor(x, prec=precision),
                               [[complex(v) for v in row] for row in G_TARGET],
                               wdvv_points_p(rng, 3))
        rep["residuals"]["wdvv_F"] = float(nabs(r_wdvv_f))
        rep["residuals"]["wdvv_Fhat"] = float(nabs(r_wdvv_fh))
        ok &= nabs(r_wdvv_f) < tol and nabs(r_wdvv_fh) < max(tol, 1e-9)

        quasi = euler_applied_to_f(t) - F_QGD_DEGREE * f_qgd(t)
        rep["residuals"]["quasi_homogeneity"] = float(nabs(quasi))
        ok &= quasi == 0

        rep["axioms"]["dual_type"] = _jsonable(axiom_check("dual_type", cover, phi))
        ok &= rep["axioms"]["dual_type"]["passed"]
        fl = flatness_report(cover, phi)
        rep["flatness"] = _jsonable(fl)
        ok &= fl["eta"]["flat"] and fl["g"]["flat"] and not fl["eta_tilde"]["flat"]
    except DiscriminantHit as exc:
        click.echo(f"degenerate point: {exc}", err=True)
        sys.exit(2)
    rep["passed"] = bool(ok)
    text = reports.write_report(out, rep)
    click.echo(text)
    sys.exit(0 if ok else 3)


@main.command("sine-gordon")
@click.option("--u", "u_text", multiple=True, help="branch point as re,im (twice)")
@click.option("--sweep", default=0, type=int, help="NxN sample sweep instead of one point")
@click.option("--precision", default=None, type=int)
@click.option("--tol", default=1e-9, type=float)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, type=click.Path())
def sine_gordon(u_text, sweep, precision, tol, seed, out):
    """Sine-Gordon modulation geometry: periods, flat chart, theta identities,
    structure constants."""
    from .elliptic import (lemma_period_derivative_residuals,
                           periods_from_branch_points, sg_flat_chart,
                           sg_metric_in_chart, sg_structure_constants,
                           theta_identity_residuals, u_roundtrip_residual)
    precision = precision or _default_precision()
    if sweep:
        rng = random.Random(seed)
        results = []
        all_ok = True
        for _ in range(sweep * sweep):
            u1 = complex(0.7 + 2.0 * rng.random(), (rng.random() - 0.5))
            u2 = complex(-0.4 - rng.random(), 0.6 * (rng.random() - 0.5))
            row = _sg_point_report(u1, u2, precision, tol)
            results.append(row)
            all_ok &= row["passed"]
        rep = {"sweep": results, "passed": all_ok}
        click.echo(reports.write_report(out, rep))
        sys.exit(0 if all_ok else 3)
    if len(u_text) != 2:
        raise click.BadParameter("pass --u re,im twice")
    u1, u2 = (_parse_complex(x) for x in u_text)
    try:
        rep = _sg_point_report(u1, u2, precision, tol)
    except BranchCollision as exc:
        click.echo(f"branch collision: {exc}", err=True)
        sys.exit(2)
    click.echo(reports.write_report(out, rep))
    sys.exit(0 if rep["passed"] else 3)


def _sg_point_report(u1, u2, precision, tol):
    from .elliptic import (lemma_period_derivative_residuals,
                           periods_from_branch_points, sg_flat_chart,
                           sg_metric_in_chart, sg_structure_constants,
                           theta_identity_residuals, u_roundtrip_residual)
    pt = periods_from_branch_points(u1, u2, precision)
    ids = theta_identity_residuals(pt, precision)
    rt = u_roundtrip_residual(pt, precision)
    sc = sg_structure_constants(pt, precision)
    ginv = sg_metric_in_chart(pt)
    g_res = max(abs(ginv[0][0]), abs(ginv[1][1]),
                abs(ginv[0][1] - 1), abs(ginv[1][0] - 1))
    lem = lemma_period_derivative_residuals(u1, u2)
    c222_two_routes = abs(sc["c222_period_form"] - sc["c222_theta_form"]) \
        / abs(sc["c222_period_form"])
    ok = (max(ids.values()) < 1e-10 and rt < 1e-9 and g_res < 1e-10
          and abs(sc["c111"]) < 1e-9 and abs(sc["c112"] - 1) < 1e-9
          and abs(sc["c122"]) < 1e-9 and c222_two_routes < 1e-9
          and max(lem.values()) < 1e-6)
    p1, p2, _ = sg_flat_chart(pt)
    return {
        "u": [reports.jnum(u1), reports.jnum(u2)],
        "omega1": reports.jnum(pt.omega1), "omega2": reports.jnum(pt.omega2),
        "tau": reports.jnum(pt.tau),
        "p_chart": [reports.jnum(p1), reports.jnum(p2)],
        "identities": {k: float(v) for k, v in ids.items()},
        "u_roundtrip": float(rt),
        "structure_constants": {k: reports.jnum(v) for k, v in sc.items()},
        "c222_two_routes": float(c222_two_routes),
        "g_antidiagonal": float(g_res),
        "lemma_derivatives": {k: float(v) for k, v in lem.items()},
        "passed": bool(ok),
    }


@main.command()
@click.option("--flow", "flow_path", required=True, type=click.Path(exists=True))
@click.option("--out", default=None, type=click.Path())
@click.option("--precision", default=None, type=int)
@click.option("--tol", default=1e-10, type=float)
def whitham(flow_path, out, precision, tol):
    """Solve the hodograph equations over an (X, T) grid and report the
    quasi-linear PDE residual (CSV: X,T,u_1..u_n,residual)."""
    with open(flow_path) as fh:
        cfg = json.load(fh)
    phi = qm_dlog()
    guess_cfg = cfg["guess"]
    if isinstance(guess_cfg, dict) and "qgd_t" in guess_cfg:
        cover = qgd_t_chart().to_cover(tuple(guess_cfg["qgd_t"]))
    else:
        cover = cover_from_json(json.dumps(guess_cfg))
    terms = [(BasisSpec.parse(f["spec"]), complex(*f["coeff"]))
             for f in cfg["flows"]]
    x0, x1, nx = cfg["X_range"]
    t0, t1, nt = cfg["T_range"]
    X_vals = list(np.linspace(x0, x1, int(nx)))
    T_vals = list(np.linspace(t0, t1, int(nt)))
    if not terms:
        ram = canonical_coordinates(cover)
        lines = ["X,T," + ",".join(f"u_{i+1}" for i in range(ram.n)) + ",residual"]
        for T in T_vals:
            for X in X_vals:
                vals = ",".join(repr(complex(as_complex(u)).real) + ""
                                for u in ram.u)
                lines.append(f"{X!r},{T!r}," + ",".join(
                    _fmt_c(u) for u in ram.u) + ",0.0")
        _write_lines(out, lines)
        click.echo("max PDE residual: 0.0 (constant field)")
        sys.exit(0)

    active_spec = terms[0][0]

    def flows(T):
        fl = [FlowTerm(active_spec, terms[0][1] + T)]
        fl += [FlowTerm(sp, c) for sp, c in terms[1:]]
        return FlowSpec(tuple(fl))

    try:
        seed_state = hodograph_solve(phi, flows(T_vals[len(T_vals) // 2]),
                                     X_vals[len(X_vals) // 2], cover, tol=tol)
        resid, states = pde_residual(phi, active_spec, flows, X_vals, T_vals,
                                     seed_state.cover, tol=tol)
    except NoConvergence as exc:
        click.echo(f"no convergence: {exc}", err=True)
        sys.exit(4)
    n = states[(0, 0)].ram.n
    lines = ["X,T," + ",".join(f"u_{i+1}" for i in range(n)) + ",residual"]
    for it, T in enumerate(T_vals):
        for ix, X in enumerate(X_vals):
            st = states[(ix, it)]
            lines.append(f"{float(X)!r},{float(T)!r},"
                         + ",".join(_fmt_c(u) for u in st.ram.u)
                         + f",{st.residual!r}")
    _write_lines(out, lines)
    summary = f"max PDE residual: {resid:.3e}"
    if len(terms) >= 2:
        spec2 = terms[1][0]

        def flows2d(T1, T2):
            fl = [FlowTerm(active_spec, terms[0][1] + T1),
                  FlowTerm(spec2, terms[1][1] + T2)]
            fl += [FlowTerm(sp, c) for sp, c in terms[2:]]
            return FlowSpec(tuple(fl))

        comm = flow_commutation_residual(
            phi, active_spec, spec2, flows2d, X_vals[len(X_vals) // 2],
            [-0.004, 0, 0.004], [-0.004, 0, 0.004], seed_state.cover, tol=tol)
        summary += f"; commutation residual: {comm:.3e}"
    click.echo(summary)
    sys.exit(0)


def _fmt_c(u):
    c = complex(as_complex(u))
    return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}j"


def _write_lines(out, lines):
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text)


@main.command("verify-all")
@click.option("--seed", default=0, type=int)
@click.option("--out", "outdir", default=None, type=click.Path())
@click.option("--precision", default=None, type=int)
@click.option("--sabotage", default=None, type=click.Choice(["wdvv"]))
def verify_all(seed, outdir, precision, sabotage):
    """Run the acceptance suite; emit a machine-readable pass/fail manifest."""
    from .acceptance import run_acceptance
    manifest = run_acceptance(seed=seed, precision=precision or _default_precision(),
                              sabotage=sabotage)
    text = reports.dumps(manifest)
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "manifest.json"), "w") as fh:
            fh.write(text + "\n")
    click.echo(text)
    sys.exit(0 if manifest["all_passed"] else 3)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, str)) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return reports.jnum(obj)


if __name__ == "__main__":
    main()
