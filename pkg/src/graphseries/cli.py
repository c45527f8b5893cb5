"""Command-line entry point: ``graphseries <command> ...``.

Failures exit nonzero and print one JSON line ``{"error": category,
"message": ...}`` to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import io, reports
from .baselines import BaConfig, EbaConfig, generate_ba, generate_eba
from .errors import GraphSeriesError, InvalidParameterError
from .estimator import METHODS, estimate_all
from .fixtures import densifying_series, synth_fixture
from .generator import GeneratorConfig, StepAudit, generate_series
from .params import ModelParams
from .patterns import analyze_series
from .validation import DEFAULT_GRID, compare_graphs, validate_theorem1, validate_theorem2, validate_theorem3

EXIT_CODES = {
    "error": 1,
    "format_error": 3,
    "invalid_parameter": 4,
    "degenerate_input": 5,
    "invalid_query": 6,
    "generation_failed": 7,
    "io_error": 8,
}


def _grid(text: str) -> List[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty grid")
    return values


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphseries", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="static and dynamic patterns of a series")
    p.add_argument("manifest")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact-distances", action="store_true", help="all-pairs hop distances (default)")
    mode.add_argument("--sample-sources", type=_positive, metavar="K", help="BFS from K sampled sources")
    p.add_argument("--seed", type=int, default=0, help="source sampling seed")
    p.add_argument("--out", default="-", help="report path, '-' for stdout")
    p.add_argument("--csv-dir", help="directory for x,y plot files (default: next to --out)")

    p = sub.add_parser("estimate", help="estimate delta_n, a_n, a_e, p")
    p.add_argument("manifest")
    p.add_argument("--window", type=_positive, default=3)
    p.add_argument("--robust", action="store_true", help="median instead of mean over steps")
    p.add_argument("--method", choices=METHODS, default="expected_state")
    p.add_argument("--out", default="-")

    p = sub.add_parser("generate", help="infer the next snapshots")
    p.add_argument("manifest")
    p.add_argument("--steps", type=_positive, default=12)
    p.add_argument("--seed", type=int, default=0)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--params", help="JSON with delta_n, a_n, a_e, p, or an estimate report")
    src.add_argument("--auto-estimate", action="store_true", help="estimate parameters from the input (default)")
    p.add_argument("--window", type=_positive, default=3, help="window for --auto-estimate")
    p.add_argument("--eq7-alpha-factor", action="store_true",
                   help="multiply the edge budget by alpha' (off: budget as printed)")
    p.add_argument("--outdir", default="generated")

    p = sub.add_parser("baseline", help="BA or EBA reference graph")
    p.add_argument("model", choices=("ba", "eba"))
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--m", type=_positive, default=2)
    p.add_argument("--m0", type=_positive, help="seed clique size (default m + 1)")
    p.add_argument("--p-add", type=float, default=0.0, help="EBA: probability of adding links")
    p.add_argument("--q-rewire", type=float, default=0.0, help="EBA: probability of rewiring links")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="Monte Carlo check of a stability or clustering law")
    p.add_argument("theorem", choices=("theorem1", "theorem2", "theorem3"))
    p.add_argument("--grid", type=_grid, default=list(DEFAULT_GRID))
    p.add_argument("--runs", type=_positive, help="runs per grid point (default 100, theorem3 50)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--manifest", help="base series (default: a synthetic densifying series)")
    p.add_argument("--base-nodes", type=_positive, default=300)
    p.add_argument("--base-delta-n", type=_positive, default=30)
    p.add_argument("--base-steps", type=_positive, default=5)
    p.add_argument("--base-alpha", type=float, default=1.3)
    p.add_argument("--base-gamma", type=float, default=3.0, help="initial-degree exponent of the base")
    p.add_argument("--delta-n", type=_positive, help="new nodes per generated step")
    p.add_argument("--out", default="-")

    p = sub.add_parser("compare", help="distances between the patterns of two snapshots")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--sample-sources", type=_positive, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("synth", help="write a model-generated series with known parameters")
    p.add_argument("--delta-n", type=int, default=50)
    p.add_argument("--a-n", type=float, default=0.7)
    p.add_argument("--a-e", type=float, default=0.8)
    p.add_argument("--p", type=float, default=0.6)
    p.add_argument("--seed-graph-size", type=_positive, default=2000)
    p.add_argument("--steps", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outdir", required=True)
    return parser


# -- commands ----------------------------------------------------------------


def _csv_dir(args) -> Optional[Path]:
    if args.csv_dir:
        return Path(args.csv_dir)
    if args.out != "-":
        return Path(args.out).resolve().parent
    return None


def cmd_analyze(args) -> None:
    series = io.load_series(args.manifest)
    report = analyze_series(series, args.sample_sources, args.seed)
    io.write_json(args.out, reports.pattern_report(report))
    outdir = _csv_dir(args)
    if outdir is None:
        return
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.out).stem if args.out != "-" else "patterns"
    for name, rows in reports.plot_series(report).items():
        io.write_xy_csv(outdir / f"{stem}.{name}.csv", rows)


def cmd_estimate(args) -> int:
    series = io.load_series(args.manifest)
    est = estimate_all(series, args.window, args.robust, args.method)
    io.write_json(args.out, reports.estimate_report(est, min(args.window, len(series) - 1), args.robust, args.method))
    if est.errors:
        _emit_error("degenerate_input", "; ".join(f"{k}: {v}" for k, v in sorted(est.errors.items())))
        return EXIT_CODES["degenerate_input"]
    return 0


def _audit_dict(a: StepAudit) -> dict:
    return {
        "delta_e": a.delta_e,
        "survivors": a.survivors,
        "new_nodes": len(a.new_nodes),
        "new_old_stubs": a.new_old_stubs,
        "old_old_sources": a.old_old_sources,
        "edges_added": a.edges_added,
        "rejections": a.rejections,
        "clamped": a.clamped,
        "old_old_distances": sorted(
            ([d if d is not None else "inf", c] for d, c in a.old_old_distances.items()),
            key=lambda x: (isinstance(x[0], str), x[0]),
        ),
    }


def cmd_generate(args) -> None:
    series = io.load_series(args.manifest)
    if args.params:
        params = reports.params_from_report(io.read_json(args.params))
        source = {"from": "file", "path": args.params}
    else:
        params = estimate_all(series, min(args.window, len(series) - 1)).params
        source = {"from": "auto-estimate", "window": args.window}
    audits: List[StepAudit] = []
    config = GeneratorConfig(params, args.seed, args.steps, args.eq7_alpha_factor)
    generated = generate_series(series, config, audits)
    outdir = Path(args.outdir)
    labels = [f"g{g.time_index:04d}" for g in generated]
    io.save_series(generated, outdir, labels, manifest_name="manifest.json")
    blocks = {
        "params": {"pattern": "generator inputs delta_n, a_n, a_e, p", **params.to_dict(), **source},
        "run": {
            "pattern": "generation settings",
            "seed": args.seed,
            "steps": args.steps,
            "eq7_alpha_factor": args.eq7_alpha_factor,
            "input_snapshots": len(series),
            "outputs": [f"{label}.txt" for label in labels],
        },
        "steps": {
            "pattern": "per-step edge budget and attachment bookkeeping",
            "rows": [dict(_audit_dict(a), time_index=g.time_index) for a, g in zip(audits, generated)],
        },
    }
    io.write_json(outdir / "provenance.json", reports.provenance_report(blocks.items()))


def cmd_baseline(args) -> None:
    m0 = args.m0 if args.m0 is not None else args.m + 1
    if args.model == "ba":
        if args.p_add or args.q_rewire:
            raise InvalidParameterError("--p-add and --q-rewire apply to eba only")
        g = generate_ba(BaConfig(args.n, args.m, m0, args.seed))
    else:
        g = generate_eba(EbaConfig(args.n, args.m, m0, args.seed, args.p_add, args.q_rewire))
    io.save_snapshot(g, args.out)


def cmd_validate(args) -> None:
    if args.manifest:
        base = io.load_series(args.manifest)
    else:
        base = densifying_series(
            n0=args.base_nodes, delta_n=args.base_delta_n, steps=args.base_steps,
            alpha=args.base_alpha, gamma=args.base_gamma, seed=args.seed,
        )
    if args.theorem == "theorem1":
        delta_n = args.delta_n or args.base_delta_n
        rep = validate_theorem1(base, delta_n, args.grid, args.runs or 100, args.seed)
    elif args.theorem == "theorem2":
        rep = validate_theorem2(base, args.grid, args.runs or 100, args.seed, args.delta_n)
    else:
        rep = validate_theorem3(base, args.grid, args.runs or 50, args.seed, args.delta_n)
    io.write_json(args.out, reports.theorem_report(rep))


def cmd_compare(args) -> None:
    a, b = io.load_snapshot(args.a), io.load_snapshot(args.b)
    rep = compare_graphs(a, b, args.sample_sources, args.seed)
    io.write_json(args.out, reports.comparison_report(rep, args.a, args.b))


def cmd_synth(args) -> None:
    params = ModelParams(args.delta_n, args.a_n, args.a_e, args.p)
    series = synth_fixture(params, args.seed_graph_size, args.steps, args.seed)
    io.save_series(series, args.outdir)


COMMANDS = {
    "analyze": cmd_analyze,
    "estimate": cmd_estimate,
    "generate": cmd_generate,
    "baseline": cmd_baseline,
    "validate": cmd_validate,
    "compare": cmd_compare,
    "synth": cmd_synth,
}


def _emit_error(category: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": category, "message": message}, sort_keys=True) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args) or 0
    except GraphSeriesError as exc:
        _emit_error(exc.category, str(exc))
        return EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        _emit_error("io_error", str(exc))
        return EXIT_CODES["io_error"]


if __name__ == "__main__":
    sys.exit(main())
