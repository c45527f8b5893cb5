"""Self-describing report documents.

Every report is a JSON object ``{"format_version", "kind", "blocks"}``.
Each block carries a ``"pattern"`` string naming the law or quantity its
numbers describe.  Distributions are stored as sorted ``[x, y]`` pairs so
integer keys survive a JSON round trip unchanged.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, List, Optional, Tuple

from .estimator import Estimates
from .io import FORMAT_VERSION
from .params import ModelParams
from .patterns import DistanceEdgeProfile, PatternReport, PowerLawFit
from .validation import ComparisonReport, TheoremReport


def _pairs(mapping: Dict) -> List[list]:
    return [[k, v] for k, v in sorted(mapping.items())]


def _finite(x: Optional[float]) -> Optional[float]:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return x


def _clean(obj):
    """Replace non-finite floats by None so the JSON stays standard."""
    if isinstance(obj, float):
        return _finite(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def document(kind: str, blocks: Dict[str, dict]) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": kind, "blocks": _clean(blocks)}


def _fit(pattern: str, fit: Optional[PowerLawFit]) -> dict:
    out = {"pattern": pattern}
    out.update(fit.to_dict() if fit else {"coefficient": None, "exponent": None, "r_squared": None, "n_points": 0})
    return out


def _profile(profile: DistanceEdgeProfile) -> dict:
    return {
        "counts": _pairs(profile.counts),
        "n_infinite": profile.n_infinite,
        "n_edges": profile.n_edges,
    }


def pattern_report(report: PatternReport) -> dict:
    growth = [
        {"step": i, "nodes": n, "edges": e, "total_nodes": tn, "total_edges": te}
        for i, (n, e, tn, te) in enumerate(report.growth, start=1)
    ]
    init = report.initial_degrees
    blocks = {
        "densification": _fit("densification power law |E_i| = A |N_i|^alpha over snapshots", report.densification),
        "total_densification": _fit(
            "densification power law |E^T| = A' |N^T|^alpha' over total graphs", report.total_densification
        ),
        "growth": {"pattern": "node and edge counts per snapshot and per total graph", "rows": growth},
        "new_new_fraction": {
            "pattern": "share of new-new edges among new edges, per step",
            "values": _pairs(report.new_new_fraction),
        },
        "initial_degree": {
            "pattern": "initial degree distribution P_initial(k) of new nodes",
            "mass": _pairs(init.mass) if init else [],
            "max_initial_degree": init.max_initial_degree if init else None,
            "max_new_nodes_per_step": init.max_new_nodes_per_step if init else None,
            "n_nodes": init.n_nodes if init else 0,
            "power_law_fit": report.initial_degree_fit.to_dict() if report.initial_degree_fit else None,
        },
        "distance_profile": {
            "pattern": "prior hop distance of new old-old edges, geometric law f(d) = p (1-p)^(d-2)",
            "per_step": {str(i): _profile(prof) for i, prof in sorted(report.distance_profiles.items())},
            "pooled": _profile(report.pooled_profile),
            "pooled_finite_mass": _pairs(report.pooled_profile.finite_mass()),
            "clustering_factor": report.clustering_factor,
        },
        "degree_distribution": {
            "pattern": "static degree distribution P(k) of the last snapshot",
            "mass": _pairs(report.degree.mass),
        },
        "distance_distribution": {
            "pattern": "static hop distance distribution of the last snapshot",
            "mass": _pairs(report.distances.mass),
            "unreachable_fraction": report.distances.unreachable_fraction,
        },
        "clustering": {
            "pattern": "static local clustering C(k) of the last snapshot",
            "by_degree": _pairs(report.clustering.by_degree),
            "mean": report.clustering.mean,
        },
        "notes": {"pattern": "components that could not be computed", "items": list(report.notes)},
    }
    return document("patterns", blocks)


def plot_series(report: PatternReport) -> Dict[str, List[Tuple[object, object]]]:
    """x, y columns per pattern, keyed by file stem."""
    pooled = report.pooled_profile.mass
    rows = {
        "densification": [(n, e) for n, e, _, _ in report.growth],
        "total_densification": [(tn, te) for _, _, tn, te in report.growth],
        "new_new_fraction": [(i, v) for i, v in sorted(report.new_new_fraction.items()) if v is not None],
        "initial_degree": sorted(report.initial_degrees.mass.items()) if report.initial_degrees else [],
        "distance_profile": list(pooled.items())
        + ([("inf", report.pooled_profile.infinite_fraction)] if report.pooled_profile.n_infinite else []),
        "degree_distribution": sorted(report.degree.mass.items()),
        "distance_distribution": sorted(report.distances.mass.items()),
        "clustering": sorted(report.clustering.by_degree.items()),
    }
    return rows


def estimate_report(est: Estimates, window: int, robust: bool, method: str) -> dict:
    d = est.to_dict()
    blocks = {
        "params": {
            "pattern": "generator inputs delta_n, a_n, a_e, p",
            "delta_n": d["delta_n"],
            "a_n": d["a_n"],
            "a_e": d["a_e"],
            "p": d["p"],
        },
        "delta_n": {"pattern": "mean new nodes per step over the last window", "window": window},
        "a_n": {"pattern": "node stable factor (geometric memory of node states)", "detail": d["a_n_detail"]},
        "a_e": {"pattern": "edge stable factor (geometric memory of edge states)", "detail": d["a_e_detail"]},
        "p": {"pattern": "clustering factor of f(d) = p (1-p)^(d-2), from pooled old-old edges", "value": d["p"]},
        "settings": {"pattern": "estimator settings", "robust": robust, "method": method},
        "errors": {"pattern": "components that could not be estimated", "items": d["errors"]},
    }
    return document("estimate", blocks)


def params_from_report(data: dict) -> ModelParams:
    """ModelParams from an estimate report or a bare ``{delta_n, a_n, a_e, p}`` object."""
    if "blocks" in data:
        data = data["blocks"]["params"]
    return ModelParams.from_dict(data)


def theorem_report(report: TheoremReport) -> dict:
    names = {
        "theorem1": "node stability coefficient |V_t+1 & V_t| / |V_t+1 | V_t| against a_n",
        "theorem2": "edge stability coefficient |E_t+1 & E_t| / |E_t+1 | E_t| against a_e",
        "theorem3": "mean local clustering of the generated snapshot, linear in p",
    }
    block = {"pattern": names.get(report.theorem, report.theorem)}
    block.update(report.to_dict())
    return document("theorem", {report.theorem: block})


def comparison_report(report: ComparisonReport, a: str, b: str) -> dict:
    block = {"pattern": "L1 distances between P(k), hop distance distribution and C(k)P(k)", "a": a, "b": b}
    block.update(report.to_dict())
    return document("comparison", {"comparison": block})


def provenance_report(entries: Iterable[Tuple[str, dict]]) -> dict:
    return document("provenance", dict(entries))
