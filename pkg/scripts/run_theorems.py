#!/usr/bin/env python3
"""Sweep the stable factors and the clustering factor and print the curves.

    python3 scripts/run_theorems.py --runs 100 --out theorems.json
"""

import argparse

from graphseries import io, reports
from graphseries.fixtures import densifying_series
from graphseries.validation import DEFAULT_GRID, validate_theorem1, validate_theorem2, validate_theorem3


def show(rep):
    print(f"\n{rep.theorem} ({rep.parameter}, {rep.runs} runs)")
    print(f"{rep.parameter:>5} {'observed':>9} {'se':>7} {'predicted':>9} verdict")
    for x, o, se, p, v in zip(rep.parameter_grid, rep.observed, rep.stderr, rep.predicted, rep.verdicts):
        print(f"{x:5.2f} {o:9.4f} {se:7.4f} {p:9.4f} {v}")
    print("monotone increasing:", rep.monotone_increasing)
    if rep.extra:
        print("linear fit:", {k: round(v, 4) for k, v in rep.extra.items()})


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gamma", type=float, default=3.0, help="initial-degree exponent of the base series")
    ap.add_argument("--out")
    args = ap.parse_args()

    base = densifying_series(n0=300, delta_n=30, steps=5, alpha=1.3, gamma=args.gamma, seed=args.seed)
    reps = [
        validate_theorem1(base, 30, DEFAULT_GRID, args.runs, args.seed),
        validate_theorem2(base, DEFAULT_GRID, args.runs, args.seed, delta_n=30),
        validate_theorem3(base, DEFAULT_GRID, max(30, args.runs // 2), args.seed, delta_n=30),
    ]
    for rep in reps:
        show(rep)
    if args.out:
        blocks = {}
        for rep in reps:
            blocks.update(reports.theorem_report(rep)["blocks"])
        io.write_json(args.out, reports.document("theorems", blocks))


if __name__ == "__main__":
    main()
