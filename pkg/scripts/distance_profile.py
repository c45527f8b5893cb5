#!/usr/bin/env python3
"""Pooled prior distance of generated old-old edges against the geometric law."""

import argparse

from graphseries import GraphSeries
from graphseries.fixtures import densifying_series
from graphseries.generator import GeneratorConfig, generate_series
from graphseries.params import ModelParams
from graphseries.patterns import geometric_profile, pooled_distance_profile, profile_l1


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=float, default=0.6)
    ap.add_argument("--nodes", type=int, default=10_000)
    ap.add_argument("--steps", type=int, default=12)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    base = densifying_series(n0=args.nodes, delta_n=400, steps=4, alpha=1.3, gamma=2.5, seed=0, m=4)
    params = ModelParams(400, 0.95, 0.95, args.p)
    generated = generate_series(base, GeneratorConfig(params, seed=args.seed, steps=args.steps))
    full = GraphSeries(base.snapshots + tuple(generated))
    prof = pooled_distance_profile(full, range(len(base) + 1, len(full) + 1))
    mass = prof.finite_mass()
    print(f"{prof.n_edges} old-old edges, {prof.n_infinite} between components")
    f = geometric_profile(args.p, max(mass))
    print(f"{'d':>3} {'observed':>9} {'geometric':>9}")
    for d in sorted(mass):
        print(f"{d:3d} {mass[d]:9.4f} {f[d]:9.4f}")
    print(f"L1 = {profile_l1(prof, args.p):.4f}")


if __name__ == "__main__":
    main()
