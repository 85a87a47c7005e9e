#!/usr/bin/env python3
"""Run the full benchmark grid (both coefficient patterns, both problem
sizes) and write the table/curve/ops CSVs plus metadata under results/.

Everything is seeded; re-running writes byte-identical CSVs.

    python scripts/reproduce_benchmarks.py [--seed 0] [--out results]
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from hslasso.cli import BenchmarkGrid, run_bench  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results")
    ap.add_argument("--methods", default="ista,fista,hs")
    args = ap.parse_args()

    grid = BenchmarkGrid(seed=args.seed,
                         methods=tuple(args.methods.split(",")))
    table, curves, ops, meta = run_bench(grid)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bench_table.csv").write_text(table)
    (out / "bench_curves.csv").write_text(curves)
    (out / "bench_ops.csv").write_text(ops)
    (out / "bench_meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True))

    print(table)
    print(f"outputs in {out}/  (curves are plot-ready: log10(1/eps) vs log10(ops))")


if __name__ == "__main__":
    main()
