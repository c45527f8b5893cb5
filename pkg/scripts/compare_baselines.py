#!/usr/bin/env python3
"""Hold out the last snapshot, infer it with the model, BA and EBA, and
report pattern distances to the held-out graph.

    python3 scripts/compare_baselines.py [--manifest series.json] [--runs 5]
"""

import argparse

import numpy as np

from graphseries import GraphSeries, io
from graphseries.baselines import EbaConfig, ba_like, generate_ba, generate_eba
from graphseries.estimator import estimate_all
from graphseries.fixtures import synth_fixture
from graphseries.generator import GeneratorConfig, generate_series
from graphseries.params import ModelParams
from graphseries.validation import compare_graphs

FIELDS = ("degree_l1", "distance_l1", "clustering_l1")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--manifest", help="series to use (default: a synthetic one)")
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--sample-sources", type=int, default=300)
    ap.add_argument("--eba-p", type=float, default=0.3)
    ap.add_argument("--eba-q", type=float, default=0.1)
    args = ap.parse_args()

    if args.manifest:
        series = io.load_series(args.manifest)
    else:
        series = synth_fixture(ModelParams(50, 0.8, 0.85, 0.6), 2000, 8, seed=11)
    history = GraphSeries(series.snapshots[:-1])
    target = series.snapshots[-1]
    params = estimate_all(history).params
    print(f"{len(series)} snapshots, target |V|={target.number_of_nodes()} |E|={target.number_of_edges()}")
    print("estimated parameters:", params.to_dict())

    results = {name: [] for name in ("model", "ba", "eba")}
    for r in range(args.runs):
        model = generate_series(history, GeneratorConfig(params, seed=r))[0]
        ba_cfg = ba_like(target.number_of_nodes(), target.number_of_edges(), seed=r)
        ba = generate_ba(ba_cfg)
        eba = generate_eba(EbaConfig(ba_cfg.n, ba_cfg.m, ba_cfg.m0, r, args.eba_p, args.eba_q))
        for name, g in (("model", model), ("ba", ba), ("eba", eba)):
            rep = compare_graphs(g, target, args.sample_sources, seed=r)
            results[name].append([getattr(rep, f) for f in FIELDS])

    print(f"\n{'':6}" + "".join(f"{f:>16}" for f in FIELDS))
    for name, rows in results.items():
        mean = np.mean(rows, axis=0)
        print(f"{name:6}" + "".join(f"{v:16.4f}" for v in mean))


if __name__ == "__main__":
    main()
