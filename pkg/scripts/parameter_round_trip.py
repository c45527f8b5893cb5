#!/usr/bin/env python3
"""Generate series with known parameters and estimate them back."""

import argparse

from graphseries.estimator import METHODS, estimate_all
from graphseries.fixtures import synth_fixture
from graphseries.params import ModelParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--steps", type=int, default=30)
    ap.add_argument("--method", choices=METHODS, default="expected_state")
    args = ap.parse_args()

    truths = [ModelParams(50, 0.7, 0.8, 0.6), ModelParams(50, 0.9, 0.6, 0.4), ModelParams(80, 0.5, 0.9, 0.75)]
    print(f"{'truth':>28} {'seed':>4} {'dN':>5} {'a_n':>7} {'a_e':>7} {'p':>7}")
    for truth in truths:
        for seed in range(args.seeds):
            series = synth_fixture(truth, 2000, args.steps, seed=seed)
            est = estimate_all(series, method=args.method)
            label = f"({truth.delta_n}, {truth.a_n}, {truth.a_e}, {truth.p})"
            if est.errors:
                print(f"{label:>28} {seed:4d} errors: {est.errors}")
                continue
            print(f"{label:>28} {seed:4d} {est.delta_n:5d} {est.a_n.value:7.4f} {est.a_e.value:7.4f} {est.p:7.4f}")


if __name__ == "__main__":
    main()
