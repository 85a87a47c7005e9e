"""Command-line harness: generate problems, run solvers with operation
counting, run the benchmark grid, and run the verification diagnostics.

Subcommands: datagen | solve | bench | verify.
Exit codes: 0 ok, 1 finished without convergence, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import baselines, diagnostics
from .datagen import SyntheticSpec, generate
from .homotopy import HSConfig, hs_solve
from .opcount import OpCounter
from .problem import (
    LassoProblem,
    NumericalFailure,
    load_problem_binary,
    load_problem_json,
    reference_minimum,
    save_problem_binary,
    save_problem_json,
)

DEFAULT_EPSILONS = (0.05, 0.03, 0.02, 0.01, 0.009, 0.008, 0.007, 0.006, 0.005)
DEFAULT_SCENARIOS = ((50, 20), (50, 80))
DEFAULT_METHODS = ("ista", "fista", "hs")
KNOWN_METHODS = ("ista", "fista", "cd", "sl", "hs")
REF_TOL = 1e-10
SIM_PATTERNS = {"sim1": "dense-exp", "sim2": "sparse-exp"}
SIM_BETA0 = {"sim1": 1.0, "sim2": 0.1}  # flat starting values of the flat methods

OPS_CSV_HEADER = "sim,n,p,method,ops_total,ops_setup,ops_mult,ops_add,ops_trans,ops_cmp"


@dataclass
class BenchmarkGrid:
    """Benchmark configuration: scenarios, precision targets, methods."""

    sims: tuple = ("sim1", "sim2")
    scenarios: tuple = DEFAULT_SCENARIOS
    epsilons: tuple = DEFAULT_EPSILONS
    methods: tuple = DEFAULT_METHODS
    seed: int = 0
    lam: float = 1e-3
    rho: float = 0.1
    snr: float = 3.0
    hs_t0: float = 3.0
    hs_h: float = 0.1
    hs_tau: float = 1e-4
    hs_inner_fixed: int = 50
    hs_max_outer: int = 1000
    hs_max_inner: int = 100000
    max_iters: int = 200000
    sl_alpha: float = 100.0

    def validate(self) -> None:
        if not self.methods:
            raise ValueError("methods must be nonempty")
        for m in self.methods:
            if m not in KNOWN_METHODS:
                raise ValueError(f"unknown method {m!r}")
        for s in self.sims:
            if s not in SIM_PATTERNS:
                raise ValueError(f"unknown simulation {s!r}")
        eps = list(self.epsilons)
        if not eps or any(e <= 0 for e in eps):
            raise ValueError("epsilons must be positive")
        if eps != sorted(set(eps), reverse=True):
            raise ValueError("epsilons must be strictly descending")


def _load_problem(path: str) -> LassoProblem:
    if path.endswith(".bin"):
        return load_problem_binary(path)
    return load_problem_json(path)


def _fmt_sig(x: float, digits: int = 12) -> str:
    return f"{x:.{digits}g}"


# ---------------------------------------------------------------------------
# datagen
# ---------------------------------------------------------------------------


def cmd_datagen(args) -> int:
    pattern = SIM_PATTERNS[args.scenario] if args.scenario else args.pattern
    spec = SyntheticSpec(n=args.n, p=args.p, rho=args.rho, snr=args.snr,
                         pattern=pattern, sparsity=args.sparsity, seed=args.seed)
    problem = generate(spec, lam=args.lam)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.name
    save_problem_json(problem, out / f"{stem}.json")
    save_problem_binary(problem, out / f"{stem}.bin")
    meta = spec.metadata()
    meta["lambda"] = args.lam
    with open(out / f"{stem}.meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
    print(f"wrote {out / (stem + '.json')}, {out / (stem + '.bin')}, {out / (stem + '.meta.json')}")
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _beta0_vector(problem: LassoProblem, spec: str) -> np.ndarray:
    if spec == "zeros":
        return np.zeros(problem.p)
    if spec == "ones":
        return np.ones(problem.p)
    try:
        return float(spec) * np.ones(problem.p)
    except ValueError:
        raise ValueError(f"unknown beta0 spec {spec!r}; use zeros, ones, or a number")


def _run_method(problem, method, ref, epsilon, args):
    counter = OpCounter()
    if method == "hs":
        if getattr(args, "hs_config", None):
            with open(args.hs_config) as fh:
                cfg = HSConfig.from_json(fh.read())
            cfg.epsilon = epsilon
            cfg.outer_ref = ref
        else:
            cfg = HSConfig(
                t0=None if args.t0 == "auto" else float(args.t0),
                h=args.h,
                epsilon=epsilon,
                B=args.bound,
                tau=args.tau,
                inner_stop=args.inner_stop,
                inner_fixed_count=args.inner_fixed,
                inner_grad_tol=args.inner_grad_tol,
                outer_stop=args.outer_stop,
                outer_ref=ref,
                max_outer=args.max_outer,
                max_inner=args.max_inner,
            )
        trace = hs_solve(problem, cfg, counter)
    else:
        cfg = baselines.BaselineConfig(
            method=method,
            beta0=_beta0_vector(problem, args.beta0),
            epsilon=epsilon,
            max_iters=args.max_iters,
            ref=ref,
            sl_alpha=args.sl_alpha if method == "sl" else None,
        )
        trace = baselines.solve(problem, cfg, counter)
    return trace, counter


def cmd_solve(args) -> int:
    problem = _load_problem(args.input)
    ref = reference_minimum(problem, args.ref_tol)
    trace, counter = _run_method(problem, args.method, ref, args.epsilon, args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace_path = out / f"trace_{args.method}.csv"
    trace.write_csv(trace_path)
    snap = counter.snapshot()
    gap = float(trace.records[-1].f_value - ref.f_min) if trace.records else math.nan
    print(f"method={args.method} converged={trace.converged} "
          f"final_gap={_fmt_sig(gap)} ops={snap.total()} setup_ops={snap.setup_ops} "
          f"trace={trace_path}")
    return 0 if trace.converged else 1


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _bench_cells(trace, f_min, epsilons):
    cells = []
    for eps in epsilons:
        ops = trace.first_ops_at_gap(f_min, eps)
        cells.append("" if ops is None else str(int(ops)))
    return cells


def grid_from_args(args) -> BenchmarkGrid:
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    sims = ("sim1", "sim2") if args.sim == "both" else (args.sim,)
    if args.n is not None and args.p is not None:
        scenarios = ((args.n, args.p),)
    else:
        scenarios = DEFAULT_SCENARIOS
    epsilons = tuple(sorted({float(e) for e in args.epsilons}, reverse=True))
    return BenchmarkGrid(
        sims=sims, scenarios=scenarios, epsilons=epsilons, methods=methods,
        seed=args.seed, lam=args.lam,
        hs_t0=3.0 if args.t0 == "auto" else float(args.t0),
        hs_h=args.h, hs_tau=args.tau, hs_inner_fixed=args.inner_fixed,
        hs_max_outer=args.max_outer, hs_max_inner=args.max_inner,
        max_iters=args.max_iters, sl_alpha=args.sl_alpha,
    )


def run_bench(grid: BenchmarkGrid) -> tuple[str, str, str, dict]:
    """Run the grid; returns (table_csv, curves_csv, ops_csv, metadata).

    One run per (simulation, scenario, method) to the tightest precision;
    the looser thresholds are read off the same trace.
    """
    grid.validate()
    epsilons = list(grid.epsilons)
    tightest = min(epsilons)

    eps_headers = ",".join(f"eps_{e!r}" for e in epsilons)
    table_lines = [f"sim,n,p,method,{eps_headers}"]
    curve_lines = ["sim,n,p,method,epsilon,log10_inv_eps,ops,log10_ops"]
    ops_lines = [OPS_CSV_HEADER]
    meta: dict = {
        "epsilons": epsilons,
        "methods": list(grid.methods),
        "scenarios": [list(s) for s in grid.scenarios],
        "sims": list(grid.sims),
        "seed": grid.seed,
        "rho": grid.rho,
        "snr": grid.snr,
        "lambda": grid.lam,
        "ref_tol": REF_TOL,
        "hs": {"t0": grid.hs_t0, "h": grid.hs_h, "inner_stop": "fixed",
               "inner_fixed": grid.hs_inner_fixed, "tau": grid.hs_tau},
        "sl_alpha": grid.sl_alpha,
        "max_iters": grid.max_iters,
        "seed_rule": "problem seed = seed + 1000*sim_index + scenario_index",
        "cells": {},
    }

    for sim_idx, sim in enumerate(grid.sims, start=1):
        for scen_idx, (n, p) in enumerate(grid.scenarios):
            seed = grid.seed + 1000 * sim_idx + scen_idx
            spec = SyntheticSpec(n=n, p=p, rho=grid.rho, snr=grid.snr,
                                 pattern=SIM_PATTERNS[sim],
                                 sparsity=min(10, p), seed=seed)
            problem = generate(spec, lam=grid.lam)
            ref = reference_minimum(problem, REF_TOL)
            for method in grid.methods:
                counter = OpCounter()
                if method == "hs":
                    cfg = HSConfig(
                        t0=grid.hs_t0, h=grid.hs_h, epsilon=tightest,
                        tau=grid.hs_tau, inner_stop="fixed",
                        inner_fixed_count=grid.hs_inner_fixed,
                        outer_stop="oracle", outer_ref=ref,
                        max_outer=grid.hs_max_outer, max_inner=grid.hs_max_inner,
                    )
                    trace = hs_solve(problem, cfg, counter)
                else:
                    cfg = baselines.BaselineConfig(
                        method=method,
                        beta0=SIM_BETA0[sim] * np.ones(p),
                        epsilon=tightest,
                        max_iters=grid.max_iters,
                        ref=ref,
                        sl_alpha=grid.sl_alpha if method == "sl" else None,
                    )
                    trace = baselines.solve(problem, cfg, counter)
                cells = _bench_cells(trace, ref.f_min, epsilons)
                table_lines.append(f"{sim},{n},{p},{method}," + ",".join(cells))
                for eps, cell in zip(epsilons, cells):
                    if not cell:
                        continue
                    ops = int(cell)
                    curve_lines.append(
                        f"{sim},{n},{p},{method},{eps!r},"
                        f"{_fmt_sig(math.log10(1.0 / eps))},{ops},"
                        f"{_fmt_sig(math.log10(ops)) if ops > 0 else ''}"
                    )
                snap = counter.snapshot()
                ops_lines.append(
                    f"{sim},{n},{p},{method},{snap.total()},{snap.setup_ops},"
                    f"{snap.mults},{snap.adds},{snap.transcendentals},{snap.comparisons}"
                )
                meta["cells"][f"{sim}/n{n}p{p}/{method}"] = {
                    "seed": seed,
                    "converged": trace.converged,
                    "f_min": ref.f_min,
                    "ops_total": snap.total(),
                    "ops_setup": snap.setup_ops,
                    **({"hs_metadata": {k: trace.metadata[k] for k in
                        ("outer_iterations", "violated_bound", "max_abs_iterate")}}
                       if method == "hs" else {}),
                }
    table_csv = "\n".join(table_lines) + "\n"
    curves_csv = "\n".join(curve_lines) + "\n"
    ops_csv = "\n".join(ops_lines) + "\n"
    return table_csv, curves_csv, ops_csv, meta


def cmd_bench(args) -> int:
    table_csv, curves_csv, ops_csv, meta = run_bench(grid_from_args(args))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        table_rows = []
        lines = table_csv.strip().split("\n")
        header = lines[0].split(",")
        for line in lines[1:]:
            table_rows.append(dict(zip(header, line.split(","))))
        with open(out / "bench_table.json", "w") as fh:
            json.dump(table_rows, fh, indent=2)
    else:
        with open(out / "bench_table.csv", "w") as fh:
            fh.write(table_csv)
    with open(out / "bench_curves.csv", "w") as fh:
        fh.write(curves_csv)
    with open(out / "bench_ops.csv", "w") as fh:
        fh.write(ops_csv)
    with open(out / "bench_meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    print(f"wrote benchmark outputs to {out}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.input:
        problem = _load_problem(args.input)
    else:
        spec = SyntheticSpec(n=args.n, p=args.p, rho=args.rho, snr=args.snr,
                             pattern=SIM_PATTERNS[args.scenario or "sim1"],
                             seed=args.seed)
        problem = generate(spec, lam=args.lam)
    ref = reference_minimum(problem, args.ref_tol)
    sweep = diagnostics.closeness_sweep(problem, ref, ts=tuple(args.levels))
    tol = diagnostics.default_support_tol(ref.beta_hat)
    support = diagnostics.support_set(ref.beta_hat, tol)
    report: dict = {
        "f_min": ref.f_min,
        "support": support.tolist(),
        "support_tol": tol,
        "closeness_sweep": sweep,
    }
    if 0 < support.size < problem.p:
        try:
            report["support_conditions"] = diagnostics.support_conditions_check(
                problem.X, support).to_dict()
        except ValueError as exc:
            report["support_conditions"] = {"error": str(exc)}
    else:
        report["support_conditions"] = {"error": "support empty or full; conditions undefined"}
    text = json.dumps(report, indent=2)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "verify.json"
    with open(path, "w") as fh:
        fh.write(text + "\n")
    print(text)
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="out")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_gen_params(parser):
    parser.add_argument("--scenario", choices=("sim1", "sim2"), default=None)
    parser.add_argument("--pattern", choices=("dense-exp", "sparse-exp"), default="dense-exp")
    parser.add_argument("--n", type=int, default=50)
    parser.add_argument("--p", type=int, default=20)
    parser.add_argument("--rho", type=float, default=0.1)
    parser.add_argument("--snr", type=float, default=3.0)
    parser.add_argument("--sparsity", type=int, default=10)
    parser.add_argument("--lambda", dest="lam", type=float, default=1e-3)


def _add_hs_params(parser):
    parser.add_argument("--t0", default="auto", help="starting level or 'auto'")
    parser.add_argument("--h", type=float, default=0.1)
    parser.add_argument("--tau", type=float, default=1e-4)
    parser.add_argument("--bound", type=float, default=None, help="iterate bound B")
    parser.add_argument("--inner-stop", choices=("fixed", "theoretical", "gradient"),
                        default="fixed")
    parser.add_argument("--inner-fixed", type=int, default=50)
    parser.add_argument("--inner-grad-tol", type=float, default=1e-8)
    parser.add_argument("--outer-stop", choices=("oracle", "theoretical-count", "t-floor"),
                        default="oracle")
    parser.add_argument("--max-outer", type=int, default=1000)
    parser.add_argument("--max-inner", type=int, default=100000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hslasso",
                                     description="Lasso solvers with operation-count benchmarking")
    sub = parser.add_subparsers(dest="command", required=True)

    pg = sub.add_parser("datagen", help="write a synthetic problem instance")
    _add_common(pg)
    _add_gen_params(pg)
    pg.add_argument("--name", default="problem")
    pg.set_defaults(func=cmd_datagen)

    ps = sub.add_parser("solve", help="run one solver on a stored problem")
    _add_common(ps)
    ps.add_argument("--method", required=True, choices=("ista", "fista", "cd", "sl", "hs"))
    ps.add_argument("--input", required=True)
    ps.add_argument("--epsilon", type=float, default=0.005)
    ps.add_argument("--beta0", default="ones", help="zeros | ones | a flat value")
    ps.add_argument("--max-iters", type=int, default=200000)
    ps.add_argument("--sl-alpha", type=float, default=100.0)
    ps.add_argument("--ref-tol", type=float, default=REF_TOL)
    ps.add_argument("--hs-config", default=None,
                    help="JSON file with homotopy settings (overrides hs flags)")
    _add_hs_params(ps)
    ps.set_defaults(func=cmd_solve)

    pb = sub.add_parser("bench", help="run the benchmark grid")
    _add_common(pb)
    pb.add_argument("--scenario", "--sim", dest="sim",
                    choices=("sim1", "sim2", "both"), default="both")
    pb.add_argument("--n", type=int, default=None)
    pb.add_argument("--p", type=int, default=None)
    pb.add_argument("--methods", default=",".join(DEFAULT_METHODS))
    pb.add_argument("--epsilons", type=float, nargs="+", default=list(DEFAULT_EPSILONS))
    pb.add_argument("--lambda", dest="lam", type=float, default=1e-3)
    pb.add_argument("--max-iters", type=int, default=200000)
    pb.add_argument("--sl-alpha", type=float, default=100.0)
    _add_hs_params(pb)
    pb.set_defaults(func=cmd_bench)

    pv = sub.add_parser("verify", help="closeness diagnostics on an instance")
    _add_common(pv)
    pv.add_argument("--input", default=None)
    _add_gen_params_verify(pv)
    pv.add_argument("--levels", type=float, nargs="+",
                    default=[1.0, 0.1, 0.01, 1e-3, 1e-4])
    pv.add_argument("--ref-tol", type=float, default=REF_TOL)
    pv.set_defaults(func=cmd_verify)
    return parser


def _add_gen_params_verify(parser):
    parser.add_argument("--scenario", choices=("sim1", "sim2"), default="sim1")
    parser.add_argument("--n", type=int, default=50)
    parser.add_argument("--p", type=int, default=20)
    parser.add_argument("--rho", type=float, default=0.1)
    parser.add_argument("--snr", type=float, default=3.0)
    parser.add_argument("--lambda", dest="lam", type=float, default=1e-3)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:  # bad flag combinations or malformed inputs
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
