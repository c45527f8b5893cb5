"""Estimate the generator parameters (delta_n, a_n, a_e, p) from an observed series.

The stable factors are found by matching moments of the initialization
step.  Under the model, a node of the total graph survives into the next
snapshot with probability equal to its expected state, so the expected
number of surviving old nodes after t_t is

    sum_{i=1..t} a (1-a)^(t-i) |V_i|

and the analogous sum over edges (restricted to edges whose endpoints both
survived) gives the expected number of surviving old edges.  Each step
yields one equation in a single unknown, solved by bracketed root
finding.

``method="stability"`` instead inverts the closed-form stability
coefficients of the node and edge sets.  It is kept for comparison; on
model output it is badly conditioned and often has no root, in which case
the one-step persistence ratio is used and the step is flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateInputError, GraphSeriesError, InvalidParameterError
from .params import ModelParams
from .patterns import MIN_P, fit_clustering_factor, pooled_distance_profile, total_densification
from .series import GraphSeries, new_node_counts

__all__ = [
    "FactorEstimate",
    "Estimates",
    "ModelParams",
    "estimate_a_e",
    "estimate_a_n",
    "estimate_all",
    "estimate_delta_n",
    "estimate_p",
    "edge_stability_factor",
    "node_stability_factor",
    "node_stability_theorem",
    "edge_stability_theorem",
]

METHODS = ("expected_state", "stability")


@dataclass(frozen=True)
class FactorEstimate:
    value: float
    per_step: Tuple[float, ...]
    fallback_steps: Tuple[int, ...] = ()
    method: str = "expected_state"
    robust: bool = False

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "per_step": list(self.per_step),
            "fallback_steps": list(self.fallback_steps),
            "method": self.method,
            "robust": self.robust,
        }


def _clamp(a: float) -> float:
    return min(1.0, max(MIN_P, a))


def _require_two(series: GraphSeries) -> None:
    if len(series) < 2:
        raise DegenerateInputError("estimation needs at least two snapshots")


def estimate_delta_n(series: GraphSeries, window: int = 3) -> int:
    """Mean number of new nodes over the last ``window`` steps, rounded half up."""
    _require_two(series)
    if not 1 <= window <= len(series) - 1:
        raise InvalidParameterError(f"window must lie in 1..{len(series) - 1}, got {window}")
    counts = new_node_counts(series)[1:]
    return int(math.floor(float(np.mean(counts[-window:])) + 0.5))


def _solve_moment(coeffs: np.ndarray, observed: float) -> float:
    """Root of sum_{j} a (1-a)^j coeffs[j] = observed on [MIN_P, 1].

    ``coeffs[j]`` is the count observed j steps before the current one.
    """
    j = np.arange(len(coeffs))

    def g(a):
        return float(np.sum(a * np.power(1.0 - a, j) * coeffs)) - observed

    hi = g(1.0)
    if hi <= 0:
        return 1.0
    lo = g(MIN_P)
    if lo >= 0:
        return MIN_P
    return float(brentq(g, MIN_P, 1.0, xtol=1e-12))


def _aggregate(values: List[float], robust: bool) -> float:
    if not values:
        raise DegenerateInputError("no steps to estimate from")
    return _clamp(float(np.median(values) if robust else np.mean(values)))


# -- closed-form stability coefficients --------------------------------------


def node_stability_theorem(t: int, a_n: float, delta_n: float, v_t: float) -> float:
    """Predicted |V_{t+1} & V_t| / |V_{t+1} | V_t| for constant growth delta_n."""
    return ((t - 1) * a_n * delta_n + v_t - delta_n) / (t * a_n * delta_n + v_t + delta_n)


def edge_stability_theorem(
    a_e: float, node_counts: List[float], v_next: float, alpha: float
) -> float:
    """Predicted |E_{t+1} & E_t| / |E_{t+1} | E_t|; ``node_counts`` holds |V_1|..|V_t|."""
    s = sum(a_e * (1 - a_e) * n**alpha for n in node_counts)
    return s / (v_next**alpha + node_counts[-1] ** alpha - s)


def _jaccard(a: int, b: int, inter: int) -> float:
    union = a + b - inter
    return inter / union if union else 1.0


def _node_theorem_step(t: int, c: float, delta_n: float, v_t: float) -> Optional[float]:
    if delta_n == 0:
        return 1.0 if c >= 1.0 else None
    denom = delta_n * (c * t - t + 1)
    if denom == 0:
        return None
    a = ((1 - c) * v_t - (1 + c) * delta_n) / denom
    return a if 0 < a <= 1 + 1e-12 else None


def _edge_theorem_step(c: float, node_counts: List[float], v_next: float, alpha: float, hint: float) -> Optional[float]:
    s = sum(n**alpha for n in node_counts)
    x = c * (v_next**alpha + node_counts[-1] ** alpha) / (s * (1 + c)) if s else 0.0
    if x > 0.25 or x <= 0:
        return None
    r = math.sqrt(1 - 4 * x)
    low, high = (1 - r) / 2, (1 + r) / 2
    # a(1-a) is symmetric; take the root nearer the persistence ratio
    return low if abs(low - hint) <= abs(high - hint) else high


# -- stable factors ----------------------------------------------------------


def node_stability_factor(
    series: GraphSeries, method: str = "expected_state", robust: bool = False
) -> FactorEstimate:
    _require_two(series)
    if method not in METHODS:
        raise InvalidParameterError(f"unknown method {method!r}")
    sizes = np.array([g.number_of_nodes() for g in series], dtype=float)
    new = new_node_counts(series)
    per_step, fallbacks = [], []
    for t in range(1, len(series)):
        g_t, g_next = series.at(t), series.at(t + 1)
        observed = g_next.number_of_nodes() - int(new[t])  # old nodes present at t+1
        if method == "expected_state":
            coeffs = sizes[:t][::-1]
            per_step.append(_solve_moment(coeffs, observed))
            continue
        inter = sum(1 for v in g_next.nodes if v in g_t)
        c = _jaccard(g_t.number_of_nodes(), g_next.number_of_nodes(), inter)
        a = _node_theorem_step(t, c, float(new[t]), sizes[t - 1])
        if a is None:
            fallbacks.append(t)
            a = inter / sizes[t - 1]
        per_step.append(_clamp(a))
    return FactorEstimate(_aggregate(per_step, robust), tuple(per_step), tuple(fallbacks), method, robust)


def edge_stability_factor(
    series: GraphSeries, method: str = "expected_state", robust: bool = False
) -> FactorEstimate:
    _require_two(series)
    if method not in METHODS:
        raise InvalidParameterError(f"unknown method {method!r}")
    total = series.total
    ru, rv = total.edge_endpoint_rows
    first = total.edge_first_seen
    per_step, fallbacks = [], []
    alpha = None
    for t in range(1, len(series)):
        old_edges = first <= t
        present_next = total.edge_states[:, t + 1]
        observed = int(np.count_nonzero(present_next & old_edges))
        if method == "expected_state":
            alive = total.node_states[:, t + 1]
            eligible = old_edges & alive[ru] & alive[rv]
            counts = total.edge_states[eligible, 1 : t + 1].sum(axis=0).astype(float)
            if counts.sum() == 0:
                continue
            per_step.append(_solve_moment(counts[::-1], observed))
            continue
        if alpha is None:
            alpha = total_densification(series).exponent
        g_t, g_next = series.at(t), series.at(t + 1)
        inter = sum(1 for e in g_next.edges if e in g_t.edges)
        c = _jaccard(g_t.number_of_edges(), g_next.number_of_edges(), inter)
        persistence = inter / g_t.number_of_edges() if g_t.number_of_edges() else 1.0
        nodes = [float(series.at(i).number_of_nodes()) for i in range(1, t + 1)]
        a = _edge_theorem_step(c, nodes, float(g_next.number_of_nodes()), alpha, persistence)
        if a is None:
            fallbacks.append(t)
            a = persistence
        per_step.append(_clamp(a))
    return FactorEstimate(_aggregate(per_step, robust), tuple(per_step), tuple(fallbacks), method, robust)


def estimate_a_n(series: GraphSeries, method: str = "expected_state", robust: bool = False) -> float:
    return node_stability_factor(series, method, robust).value


def estimate_a_e(series: GraphSeries, method: str = "expected_state", robust: bool = False) -> float:
    return edge_stability_factor(series, method, robust).value


def estimate_p(series: GraphSeries) -> float:
    """Clustering factor from the prior distances of all new old-old edges, pooled."""
    _require_two(series)
    return fit_clustering_factor(pooled_distance_profile(series))


# -- bundle ------------------------------------------------------------------


@dataclass
class Estimates:
    delta_n: Optional[int]
    a_n: Optional[FactorEstimate]
    a_e: Optional[FactorEstimate]
    p: Optional[float]
    errors: Dict[str, str] = field(default_factory=dict)

    @property
    def params(self) -> ModelParams:
        if self.errors:
            raise DegenerateInputError(
                "incomplete estimate: " + "; ".join(f"{k}: {v}" for k, v in sorted(self.errors.items()))
            )
        return ModelParams(self.delta_n, self.a_n.value, self.a_e.value, self.p)

    def to_dict(self) -> dict:
        return {
            "delta_n": self.delta_n,
            "a_n": self.a_n.value if self.a_n else None,
            "a_e": self.a_e.value if self.a_e else None,
            "p": self.p,
            "a_n_detail": self.a_n.to_dict() if self.a_n else None,
            "a_e_detail": self.a_e.to_dict() if self.a_e else None,
            "errors": dict(sorted(self.errors.items())),
        }


def estimate_all(
    series: GraphSeries, window: int = 3, robust: bool = False, method: str = "expected_state"
) -> Estimates:
    """All four parameters; a failing component is recorded in ``errors``."""
    _require_two(series)
    window = min(window, len(series) - 1)
    out = Estimates(None, None, None, None)
    steps = [
        ("delta_n", lambda: estimate_delta_n(series, window)),
        ("a_n", lambda: node_stability_factor(series, method, robust)),
        ("a_e", lambda: edge_stability_factor(series, method, robust)),
        ("p", lambda: estimate_p(series)),
    ]
    for name, fn in steps:
        try:
            setattr(out, name, fn())
        except GraphSeriesError as exc:
            out.errors[name] = str(exc)
    return out
