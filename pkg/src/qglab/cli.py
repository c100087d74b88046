"""Command-line front end.

Subcommands: spectrum, diameter, bounds, family, surgery, verify, suite.
Every command writes its result rows to the output directory in the chosen
format (CSV by default); the suite runner also renders figures next to the
tables.  Exit codes: 0 success, 1 a checked inequality failed, 2 usage or
I/O error.  The environment variable QGLAB_OUT_DIR overrides --out-dir.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from qglab import bounds as bnd
from qglab import families as fam
from qglab import report
from qglab import spectral as sp
from qglab import surgery as srg
from qglab import verify as vf
from qglab.graph import (
    GraphError,
    GraphPoint,
    MetricGraph,
    betti,
    diameter,
    dirichlet_eccentricity,
    dump_graph,
    max_loop_length,
    parse_graph,
    total_length,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    subcommand: str
    out_dir: Path
    output_format: str = "csv"
    seed: int = 42
    count: int = 5
    tol_k: float = 1e-10
    tol_res: float = 1e-8
    mesh_h: float | None = None


def _solver_options(cfg: RunConfig, cross_check: str = "count") -> sp.SolverOptions:
    return sp.SolverOptions(
        tol_k=cfg.tol_k,
        tol_res=cfg.tol_res,
        cross_check=cross_check,
        cross_check_h=cfg.mesh_h,
    )


def _load_graph(path: str) -> MetricGraph:
    return parse_graph(Path(path).read_text())


def _build_family(name: str, args) -> MetricGraph:
    if name == "star":
        return fam.make_star(fam.StarParams(args.L, args.D, args.n))
    if name == "Dn":
        return fam.make_symmetric_dumbbell(args.L, args.D, args.n)
    if name == "Tn":
        return fam.make_star_tree(args.L, args.D, args.k, args.n)
    if name == "dumbbell":
        return fam.make_star_dumbbell(
            fam.DumbbellParams(args.ell0, args.ell1, args.ell2, args.n)
        )
    if name == "path":
        return fam.make_path(args.L)
    if name == "loop":
        return fam.make_loop(args.L)
    if name == "equilateral_star":
        return fam.make_equilateral_star(args.L, args.k)
    if name == "tadpole":
        return fam.make_tadpole(args.loop_len, args.tail_len)
    if name == "pendant_cycle":
        return fam.make_pendant_cycle(args.side, args.pendant)
    raise GraphError(f"unknown family {name!r}")


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--D", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--ell0", type=float, default=None)
    p.add_argument("--ell1", type=float, default=None)
    p.add_argument("--ell2", type=float, default=None)
    p.add_argument("--loop-len", dest="loop_len", type=float, default=None)
    p.add_argument("--tail-len", dest="tail_len", type=float, default=None)
    p.add_argument("--side", type=float, default=None)
    p.add_argument("--pendant", type=float, default=None)


# ---------------------------------------------------------------------------
# Plain subcommands
# ---------------------------------------------------------------------------


def cmd_spectrum(args, cfg: RunConfig) -> int:
    g = _load_graph(args.input)
    opts = _solver_options(cfg)
    spec = sp.eigenvalues(g, dirichlet=args.dirichlet or None, count=cfg.count, opts=opts)
    rows = [
        {"index": i + 1, "lam": lam, "k": math.sqrt(max(lam, 0.0))}
        for i, lam in enumerate(spec.values())
    ]
    for row in rows:
        print(report.fmt(row["lam"]))
    out = report.write_rows(cfg.out_dir / "spectrum", rows, cfg.output_format)
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def cmd_diameter(args, cfg: RunConfig) -> int:
    g = _load_graph(args.input)
    row = {
        "total_length": total_length(g),
        "diameter": diameter(g),
        "betti": betti(g),
        "max_loop_length": max_loop_length(g),
    }
    if g.dirichlet_vertices:
        row["dirichlet_eccentricity"] = dirichlet_eccentricity(g)
    for key, value in row.items():
        print(f"{key} {report.fmt(value)}")
    report.write_rows(cfg.out_dir / "diameter", [row], cfg.output_format)
    return EXIT_OK


def cmd_bounds(args, cfg: RunConfig) -> int:
    import json

    tag = args.tag
    out: dict = {"tag": tag}
    if tag == "thm1":
        w = bnd.omega_spectral_gap(args.L, args.D)
        out.update(omega=w.omega, omega_sq=w.omega_sq, residual=w.residual)
        for c in bnd.closed_form_bounds("neig2", L=args.L, D=args.D):
            out[f"{c.name}"] = c.value
    elif tag == "thm2":
        gam = bnd.gamma(args.L, args.D, args.k, args.beta)
        out["gamma"] = gam
        if gam > 0:
            w = bnd.omega_higher(args.L, args.D, args.k, args.beta)
            out.update(omega=w.omega, omega_sq=w.omega_sq, residual=w.residual)
            for c in bnd.closed_form_bounds(
                "neigk", L=args.L, D=args.D, k=args.k, beta=args.beta
            ):
                out[f"{c.name}"] = c.value
        else:
            out["note"] = "gamma <= 0: hypothesis violated"
    elif tag == "star":
        w = bnd.omega_star_limit(args.L, args.D)
        out.update(omega=w.omega, omega_sq=w.omega_sq, residual=w.residual)
        for c in bnd.closed_form_bounds("prop14", L=args.L, D=args.D):
            out[f"{c.provenance}:{c.name}"] = c.value
    elif tag == "wentzell":
        w = bnd.omega_point_mass(args.D, args.m)
        out.update(omega=w.omega, omega_sq=w.omega_sq, residual=w.residual)
    elif tag == "conjecture":
        w = bnd.omega_conjectured(args.L, args.D, args.k)
        out.update(omega=w.omega, omega_sq=w.omega_sq, residual=w.residual)
    elif tag == "nicaise":
        (c,) = bnd.closed_form_bounds("nicaise", L=args.L)
        out[c.name] = c.value
    elif tag == "friedlander":
        for c in bnd.closed_form_bounds("friedlander", L=args.L, k=args.k):
            out[f"{c.provenance}:{c.name}"] = c.value
    else:
        raise GraphError(f"unknown bounds tag {tag!r}")
    clean = {k: report.round15(v) for k, v in out.items()}
    print(json.dumps(clean, sort_keys=True))
    report.write_rows(cfg.out_dir / f"bounds_{tag}", [clean], cfg.output_format)
    return EXIT_OK


def cmd_family(args, cfg: RunConfig) -> int:
    g = _build_family(args.name, args)
    text = dump_graph(g, comment=f"family {args.name}")
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_surgery(args, cfg: RunConfig) -> int:
    g = _load_graph(args.input)
    if args.op == "glue":
        result = srg.glue(g, args.v1, args.v2)
    elif args.op == "cut":
        result = srg.cut(g, GraphPoint(args.edge, args.offset))
    elif args.op == "cut-loops":
        result = srg.cut_loops_at_midpoints(g)
    elif args.op == "lengthen":
        result = srg.lengthen(g, args.edge, args.delta)
    elif args.op == "transplant":
        deletes = [s for s in (args.delete or "").split(",") if s]
        pendants = [float(s) for s in (args.pendants or "").split(",") if s]
        extensions = {}
        for item in (args.extend or "").split(","):
            if item:
                eid, delta = item.split(":")
                extensions[eid] = float(delta)
        result = srg.transplant(g, deletes, args.vertex, pendants, extensions)
    else:
        raise GraphError(f"unknown surgery op {args.op!r}")
    text = dump_graph(result, comment=f"surgery {args.op}")
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.input:
        g = _load_graph(args.input)
    elif args.family:
        g = _build_family(args.family, args)
    else:
        print("verify needs --in or --family", file=sys.stderr)
        return EXIT_USAGE
    opts = _solver_options(cfg)
    if args.check == "thm1":
        rep = vf.check_spectral_gap_bound(g, opts=opts)
    elif args.check == "thm2":
        if args.k is None:
            print("verify thm2 needs --k", file=sys.stderr)
            return EXIT_USAGE
        rep = vf.check_higher_bound(g, args.k, opts=opts)
    elif args.check == "conjecture":
        if args.k is None:
            print("verify conjecture needs --k", file=sys.stderr)
            return EXIT_USAGE
        L, D = total_length(g), diameter(g)
        if L / args.k <= D / 2:
            rep = vf.BoundReport(
                "conjecture", "cli", L, D, betti(g), args.k, None, None,
                "conjecture", "hypothesis-not-met", None, "L/k <= D/2",
            )
        else:
            mu = sp.nth_eigenvalue(g, args.k, opts=opts)
            w = bnd.omega_conjectured(L, D, args.k)
            margin = mu - w.omega_sq
            rep = vf.BoundReport(
                "conjecture", "cli", L, D, betti(g), args.k, mu, w.omega_sq,
                "conjecture", "holds" if margin > -vf.STRICT_TOL else "fails", margin,
            )
    else:
        print(f"unknown check {args.check!r}", file=sys.stderr)
        return EXIT_USAGE
    rows = report.bound_rows([rep], cfg.output_format)
    report.write_rows(cfg.out_dir / f"verify_{args.check}", rows, cfg.output_format)
    print(
        f"{rep.verdict.upper()} {args.check}: mu={report.fmt(rep.mu)} "
        f"bound={report.fmt(rep.bound)} margin={report.fmt(rep.margin)} {rep.note}"
    )
    return EXIT_OK if rep.verdict != "fails" else EXIT_VERDICT


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _suite_interval(cfg: RunConfig):
    opts = _solver_options(cfg)
    rows = []
    mu2 = sp.nth_eigenvalue(fam.make_path(1.0), 2, opts=opts)
    rows.append(
        {
            "id": "interval_natural_mu2",
            "value": mu2,
            "target": math.pi**2,
            "error": abs(mu2 - math.pi**2),
            "ok": abs(mu2 - math.pi**2) <= 1e-8,
        }
    )
    mu1 = sp.nth_eigenvalue(fam.make_path(1.0), 1, dirichlet=["a"], opts=opts)
    rows.append(
        {
            "id": "interval_dirichlet_mu1",
            "value": mu1,
            "target": math.pi**2 / 4,
            "error": abs(mu1 - math.pi**2 / 4),
            "ok": abs(mu1 - math.pi**2 / 4) <= 1e-8,
        }
    )
    return rows, all(r["ok"] for r in rows), []


def _suite_crossval(cfg: RunConfig):
    from qglab import fem

    rows = []
    ok = True
    opts = _solver_options(cfg, cross_check="none")
    for i in range(12):
        g = vf.random_graph(vf.RandomGraphSpec(seed=cfg.seed + i, min_edges=3, max_edges=6))
        exact = sp.eigenvalues(g, count=5, opts=opts).values(5)
        oracle = fem.fem_eigenvalues(g, count=5, h_target=cfg.mesh_h)
        for lam, ext, est in zip(exact, oracle.values, oracle.estimates):
            err = abs(lam - ext)
            good = err <= est + 1e-8 * (1.0 + lam)
            ok = ok and good
            rows.append(
                {"id": f"crossval_{i}", "lam": lam, "fem": ext, "estimate": est,
                 "error": err, "ok": good}
            )
    return rows, ok, []


def _suite_roots(cfg: RunConfig):
    import numpy as np

    rows = []
    ok = True
    w_b = bnd.omega_spectral_gap(2.0, 1.0).omega
    w_g = bnd.smallest_root_golden(0.5, 0.5)
    rows.append(
        {"id": "bisect_vs_golden", "bisect": w_b, "golden": w_g,
         "delta": abs(w_b - w_g), "ok": abs(w_b - w_g) <= 1e-9}
    )
    ok = ok and rows[-1]["ok"]
    rng = np.random.default_rng(cfg.seed)
    for i in range(100):
        L = float(rng.uniform(0.5, 8.0))
        D = float(rng.uniform(0.1, 0.95)) * L
        ident = abs(
            bnd.omega_star_limit(L / 2, D / 2).omega - bnd.omega_spectral_gap(L, D).omega
        )
        good = ident <= 1e-12
        ok = ok and good
        if i < 5 or not good:
            rows.append({"id": f"substitution_{i}", "L": L, "D": D, "delta": ident, "ok": good})
    return rows, ok, []


def _suite_thm1(cfg: RunConfig):
    import numpy as np

    opts = _solver_options(cfg)
    reports, margins = [], []
    ok = True
    produced = seed = 0
    while produced < 60 and seed < 600:
        g = vf.random_graph(
            vf.RandomGraphSpec(seed=cfg.seed + seed, min_edges=3, max_edges=7,
                               betti=seed % 3)
        )
        seed += 1
        rep = vf.check_spectral_gap_bound(g, opts=opts, sample_id=f"thm1_{seed}")
        if rep.verdict == "hypothesis-not-met":
            continue
        produced += 1
        margins.append(rep.margin)
        ok = ok and rep.verdict == "holds" and rep.margin > 0
        reports.append(rep)
    rows = report.bound_rows(reports, cfg.output_format)
    # two-sided bound sandwich on a parameter grid
    grid_ok = True
    for L in np.linspace(0.4, 10.0, 25):
        for frac in np.linspace(0.04, 0.96, 25):
            D = float(L * frac)
            w2 = bnd.omega_spectral_gap(float(L), D).omega_sq
            lo, hi = 1.0 / (L * D), 12.0 / (L * D)
            if not (lo < w2 < hi):
                grid_ok = False
    rows.append({"id": "neig2_sandwich_grid", "ok": grid_ok})
    ok = ok and grid_ok
    figures = [
        report.save_margin_histogram(
            cfg.out_dir / "thm1_margins.png", margins, "spectral gap margin over random graphs"
        )
    ]
    return rows, ok, figures


def _suite_convergence(cfg: RunConfig):
    n_list = list(range(3, 41))
    rows_dc = vf.check_convergence_dumbbell(2.0, 1.0, n_list)
    w2 = rows_dc[0].omega_sq
    ok = all(
        rows_dc[i].mu2_dumbbell > rows_dc[i + 1].mu2_dumbbell for i in range(len(rows_dc) - 1)
    )
    ok = ok and all(r.equality_dev <= 1e-9 for r in rows_dc)
    ok = ok and all(r.gap > 0 for r in rows_dc)
    rows = [dataclasses.asdict(r) for r in rows_dc]
    figures = [
        report.save_line_figure(
            cfg.out_dir / "convergence_dumbbell.png",
            [r.n for r in rows_dc],
            {"mu2(dumbbell_n)": [r.mu2_dumbbell for r in rows_dc]},
            "n",
            "eigenvalue",
            "spectral gap of the dumbbell family vs its limit",
            hline=w2,
            hline_label="limit root squared",
        )
    ]
    return rows, ok, figures


def _suite_balance(cfg: RunConfig):
    rows_b = vf.check_dumbbell_balance(1.0, 0.6, 3, grid=13)
    values = [r.mu2 for r in rows_b]
    mid = len(values) // 2
    ok = min(values) == values[mid]
    sym_dev = max(abs(values[i] - values[-1 - i]) for i in range(mid))
    ok = ok and sym_dev <= 1e-9
    rows = [dataclasses.asdict(r) for r in rows_b]
    rows.append({"symmetry_dev": sym_dev, "ok": ok})
    figures = [
        report.save_line_figure(
            cfg.out_dir / "balance_sweep.png",
            [r.ell1 for r in rows_b],
            {"mu2": values},
            "first pendant length",
            "spectral gap",
            "pendant balance sweep at fixed handle and budget",
        )
    ]
    return rows, ok, figures


def _suite_thm2(cfg: RunConfig):
    opts = sp.SolverOptions(cross_check="none")
    reports = []
    ok = True
    gaps = []
    for n in range(3, 21):
        g = fam.make_star_tree(3.0, 1.0, 3, n)
        rep = vf.check_higher_bound(g, 3, opts=opts, sample_id=f"thm2_T{n}")
        reports.append(rep)
        ok = ok and rep.verdict == "holds" and rep.margin > 0
        gaps.append(rep.margin)
    ok = ok and all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1))
    # hypothesis gates
    gate1 = vf.check_higher_bound(fam.make_tadpole(2.0, 0.5), 3)
    gate2 = vf.check_higher_bound(fam.make_path(1.0), 9)  # gamma < 0 for large k
    reports.extend([gate1, gate2])
    ok = ok and gate1.verdict == "hypothesis-not-met"
    ok = ok and gate2.verdict == "hypothesis-not-met"
    rows = report.bound_rows(reports, cfg.output_format)
    figures = [
        report.save_line_figure(
            cfg.out_dir / "thm2_gaps.png",
            list(range(3, 21)),
            {"mu3 - bound": gaps},
            "n",
            "margin",
            "higher-eigenvalue margin of the star-tree family",
        )
    ]
    return rows, ok, figures


def _suite_surgery(cfg: RunConfig):
    glue = vf.check_glue_monotone(seed=cfg.seed, cases=25)
    lengthen = vf.check_lengthen_monotone(seed=cfg.seed + 1000, cases=25)
    transplant = vf.check_transplant_monotone(seed=cfg.seed + 2000, cases=25)
    rows = [
        {"id": "glue", **dataclasses.asdict(glue)},
        {"id": "lengthen", **dataclasses.asdict(lengthen)},
        {"id": "transplant", **dataclasses.asdict(transplant)},
    ]
    for r in rows:
        r["notes"] = ";".join(r.get("notes", ()))
    ok = all(r["violations"] == 0 for r in rows)
    return rows, ok, []


def _suite_hadamard(cfg: RunConfig):
    check = vf.check_length_derivative(seed=cfg.seed, cases=12)
    rows = [dataclasses.asdict(check)]
    return rows, check.max_error <= 1e-5, []


def _suite_nodal(cfg: RunConfig):
    check = vf.check_nodal_counts(seed=cfg.seed, cases=40)
    part = vf.check_partition_bound(seed=cfg.seed + 4000, cases=25)
    rows = [
        {"id": "nodal_counts", **dataclasses.asdict(check)},
        {"id": "partition_bound", **{k: v for k, v in dataclasses.asdict(part).items() if k != "notes"}},
    ]
    ok = check.violations == 0 and part.violations == 0
    return rows, ok, []


def _suite_monotonicity(cfg: RunConfig):
    rows = []
    ok = True
    in_n = vf.star_values_in_n(1.0, 0.5, [3, 4, 5, 6])
    ok = ok and all(in_n[i][1] > in_n[i + 1][1] for i in range(len(in_n) - 1))
    rows += [{"id": f"star_n_{n}", "value": v} for n, v in in_n]
    in_D = vf.star_values_in_D(1.0, [0.3, 0.4, 0.5, 0.6], 4)
    ok = ok and all(in_D[i][1] > in_D[i + 1][1] for i in range(len(in_D) - 1))
    rows += [{"id": f"star_D_{D}", "value": v} for D, v in in_D]
    n1, val, ref = vf.star_longer_length_witness(1.0, 0.5, 3, 1.2)
    rows.append({"id": "longer_length_witness", "n1": n1, "value": val, "reference": ref})
    ok = ok and n1 is not None
    sym = vf.check_symmetrisation(
        fam.StarParams(1.0, 0.5, 3), fam.StarParams(1.4, 0.6, 3)
    )
    rows.append({"id": "symmetrisation", **dataclasses.asdict(sym)})
    rows[-1]["shorter_ok"] = str(rows[-1]["shorter_ok"])
    ok = ok and sym.margin > 0 and sym.equality_dev <= 1e-9
    kl = vf.check_key_comparison(fam.make_star(fam.StarParams(1.0, 0.5, 3)))
    rows.append({"id": "key_comparison_star", **dataclasses.asdict(kl)})
    ok = ok and kl.verdict == "witness-found"
    return rows, ok, []


def _suite_discrepancy(cfg: RunConfig):
    rows = [dataclasses.asdict(r) for r in vf.discrepancy_report()]
    return rows, True, []


def _suite_conjecture(cfg: RunConfig):
    reports = vf.explore_conjecture(
        vf.RandomGraphSpec(seed=cfg.seed, min_edges=3, max_edges=6, betti=1),
        2,
        20,
        out_dir=cfg.out_dir,
    )
    reports += vf.explore_conjecture(
        vf.RandomGraphSpec(seed=cfg.seed + 500, min_edges=3, max_edges=6, betti=2),
        3,
        10,
        out_dir=cfg.out_dir,
    )
    rows = report.bound_rows(reports, cfg.output_format)
    ok = all(r.verdict != "fails" for r in reports)
    return rows, ok, []


SUITES = {
    "interval": _suite_interval,
    "crossval": _suite_crossval,
    "roots": _suite_roots,
    "thm1": _suite_thm1,
    "convergence": _suite_convergence,
    "balance": _suite_balance,
    "thm2": _suite_thm2,
    "surgery": _suite_surgery,
    "hadamard": _suite_hadamard,
    "nodal": _suite_nodal,
    "monotonicity": _suite_monotonicity,
    "discrepancy": _suite_discrepancy,
    "conjecture": _suite_conjecture,
}


def run_suite(name: str, cfg: RunConfig) -> int:
    names = list(SUITES) if name == "all" else [name]
    summary = []
    all_ok = True
    for n in names:
        if n not in SUITES:
            print(f"unknown suite {n!r}; choose from {list(SUITES)} or 'all'", file=sys.stderr)
            return EXIT_USAGE
        rows, ok, figures = SUITES[n](cfg)
        report.write_rows(cfg.out_dir / f"suite_{n}", rows, cfg.output_format)
        summary.append({"suite": n, "ok": ok, "rows": len(rows)})
        all_ok = all_ok and ok
        status = "PASS" if ok else "FAIL"
        print(f"{status} {n} ({len(rows)} rows)")
        for fig in figures:
            print(f"  figure {fig}", file=sys.stderr)
    report.write_rows(cfg.out_dir / "suite_summary", summary, cfg.output_format)
    return EXIT_OK if all_ok else EXIT_VERDICT


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default="qglab-out", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--count", type=int, default=5)
    common.add_argument("--tol-k", type=float, default=1e-10)
    common.add_argument("--tol-res", type=float, default=1e-8)
    common.add_argument("--mesh-h", type=float, default=None)

    parser = argparse.ArgumentParser(
        prog="qglab",
        description="spectral laboratory for compact metric graphs",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="lowest eigenvalues of a graph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dirichlet", action="append", help="extra Dirichlet vertex id")

    p = sub.add_parser("diameter", parents=[common], help="metric invariants of a graph")
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("bounds", parents=[common],
                       help="limit roots and bound constants as JSON")
    p.add_argument("tag", choices=("thm1", "thm2", "star", "wentzell", "conjecture",
                                   "nicaise", "friedlander"))
    p.add_argument("--L", type=float)
    p.add_argument("--D", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--m", type=float)

    p = sub.add_parser("family", parents=[common],
                       help="construct a named family, dump as MGF")
    p.add_argument("name", choices=("star", "Dn", "Tn", "dumbbell", "path", "loop",
                                    "equilateral_star", "tadpole", "pendant_cycle"))
    _family_args(p)
    p.add_argument("--out")

    p = sub.add_parser("surgery", parents=[common], help="apply a surgery operation")
    p.add_argument("op", choices=("glue", "cut", "cut-loops", "lengthen", "transplant"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--v1")
    p.add_argument("--v2")
    p.add_argument("--edge")
    p.add_argument("--offset", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--delete", help="comma-separated edge ids")
    p.add_argument("--vertex")
    p.add_argument("--pendants", help="comma-separated pendant lengths")
    p.add_argument("--extend", help="comma-separated edge:delta extensions")

    p = sub.add_parser("verify", parents=[common],
                       help="check a bound on a graph or family")
    p.add_argument("check", choices=("thm1", "thm2", "conjecture"))
    p.add_argument("--in", dest="input")
    p.add_argument("--family", choices=("star", "Dn", "Tn", "dumbbell", "path", "loop",
                                        "equilateral_star", "tadpole", "pendant_cycle"))
    _family_args(p)

    p = sub.add_parser("suite", parents=[common], help="run a named verification suite")
    p.add_argument("name", help=f"one of {', '.join(SUITES)} or 'all'")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    out_dir = Path(os.environ.get("QGLAB_OUT_DIR") or args.out_dir)
    cfg = RunConfig(
        subcommand=args.subcommand,
        out_dir=out_dir,
        output_format=args.format,
        seed=args.seed,
        count=args.count,
        tol_k=args.tol_k,
        tol_res=args.tol_res,
        mesh_h=args.mesh_h,
    )
    try:
        if args.subcommand == "spectrum":
            return cmd_spectrum(args, cfg)
        if args.subcommand == "diameter":
            return cmd_diameter(args, cfg)
        if args.subcommand == "bounds":
            return cmd_bounds(args, cfg)
        if args.subcommand == "family":
            return cmd_family(args, cfg)
        if args.subcommand == "surgery":
            return cmd_surgery(args, cfg)
        if args.subcommand == "verify":
            return cmd_verify(args, cfg)
        if args.subcommand == "suite":
            return run_suite(args.name, cfg)
        parser.error(f"unknown subcommand {args.subcommand!r}")
    except (GraphError, bnd.BoundsError, sp.SpectralError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
