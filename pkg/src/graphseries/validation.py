"""Monte Carlo checks of how the stable factors and the clustering factor
shape the generated snapshot, plus pattern distances between two graphs.

Replica r at every grid point uses the seed ``(seed, r)``, so the grid is
swept with common random numbers and curves are smooth in the parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import DegenerateInputError, InvalidParameterError
from .estimator import edge_stability_theorem, estimate_delta_n, node_stability_theorem
from .generator import expected_states, generate_step_detailed, prepare
from .graph import Snapshot
from .params import ModelParams
from .patterns import (
    degree_distribution,
    distance_distribution,
    fit_power_law,
    local_clustering,
    total_densification,
)
from .series import GraphSeries

DEFAULT_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))
PASS_TOLERANCE = 0.10
MIN_RUNS = 30


@dataclass
class TheoremReport:
    theorem: str
    parameter: str
    parameter_grid: List[float]
    predicted: List[float]
    observed: List[float]
    stderr: List[float]
    runs: int
    verdicts: List[str] = field(default_factory=list)
    model_expected: List[float] = field(default_factory=list)
    fixed: Dict[str, float] = field(default_factory=dict)
    extra: Dict[str, object] = field(default_factory=dict)

    @property
    def monotone_increasing(self) -> bool:
        return all(b > a for a, b in zip(self.observed, self.observed[1:]))

    @property
    def relative_deviation(self) -> List[float]:
        return [
            abs(o - p) / abs(p) if p else float("inf")
            for o, p in zip(self.observed, self.predicted)
        ]

    @property
    def within_3se(self) -> List[bool]:
        """Whether each observed mean lies within three standard errors of the prediction."""
        return [abs(o - p) <= 3 * se for o, p, se in zip(self.observed, self.predicted, self.stderr)]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "parameter": self.parameter,
            "parameter_grid": list(self.parameter_grid),
            "predicted": list(self.predicted),
            "observed": list(self.observed),
            "stderr": list(self.stderr),
            "relative_deviation": self.relative_deviation,
            "verdicts": list(self.verdicts),
            "within_3se": self.within_3se,
            "model_expected": list(self.model_expected),
            "monotone_increasing": self.monotone_increasing,
            "runs": self.runs,
            "fixed": dict(self.fixed),
            "extra": dict(self.extra),
        }


def _check(base: GraphSeries, grid: Sequence[float], runs: int, min_grid: int = 1) -> None:
    if runs < MIN_RUNS:
        raise InvalidParameterError(f"need at least {MIN_RUNS} runs per grid point, got {runs}")
    if len(set(grid)) < min_grid:
        raise InvalidParameterError(f"need at least {min_grid} distinct grid values")
    if len(base) < 2:
        raise DegenerateInputError("base series needs at least two snapshots")


def _verdicts(observed: Sequence[float], predicted: Sequence[float]) -> List[str]:
    return [
        "PASS" if p and abs(o - p) / abs(p) <= PASS_TOLERANCE else "DIVERGENT"
        for o, p in zip(observed, predicted)
    ]


def _jaccard(a, b) -> float:
    union = len(a | b)
    return len(a & b) / union if union else 1.0


def _replicas(base: GraphSeries, params: ModelParams, runs: int, seed: int):
    for r in range(runs):
        rng = np.random.default_rng([seed, r])
        yield generate_step_detailed(base, params, rng)


def _mean_se(values: List[float]):
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(len(arr))) if len(arr) > 1 else 0.0


def validate_theorem1(
    base_series: GraphSeries,
    delta_n: int,
    a_n_grid: Sequence[float] = DEFAULT_GRID,
    runs: int = 100,
    seed: int = 0,
    a_e: float = 0.9,
    p: float = 0.5,
) -> TheoremReport:
    """Node stability coefficient of the generated step against its closed form."""
    _check(base_series, a_n_grid, runs)
    last = base_series.snapshots[-1]
    t = len(base_series)
    v_t = set(last.nodes)
    total = base_series.total
    in_last = total.node_states[:, -1]
    observed, stderr, predicted, expected = [], [], [], []
    for a in a_n_grid:
        params = ModelParams(delta_n, a, a_e, p)
        coeffs = [_jaccard(v_t, set(g.nodes)) for g, _ in _replicas(base_series, params, runs, seed)]
        m, se = _mean_se(coeffs)
        observed.append(m)
        stderr.append(se)
        predicted.append(node_stability_theorem(t, a, delta_n, len(v_t)))
        e = expected_states(total.node_states, a)
        inter = e[in_last].sum()
        union = len(v_t) + delta_n + e[~in_last].sum()
        expected.append(float(inter / union))
    return TheoremReport(
        "theorem1",
        "a_n",
        list(a_n_grid),
        predicted,
        observed,
        stderr,
        runs,
        _verdicts(observed, predicted),
        expected,
        {"delta_n": delta_n, "a_e": a_e, "p": p, "t": t, "V_t": len(v_t)},
    )


def validate_theorem2(
    base_series: GraphSeries,
    a_e_grid: Sequence[float] = DEFAULT_GRID,
    runs: int = 100,
    seed: int = 0,
    delta_n: Optional[int] = None,
    a_n: float = 0.9,
    p: float = 0.5,
) -> TheoremReport:
    """Edge stability coefficient of the generated step against its closed form."""
    _check(base_series, a_e_grid, runs)
    if delta_n is None:
        delta_n = max(1, estimate_delta_n(base_series, min(3, len(base_series) - 1)))
    last = base_series.snapshots[-1]
    e_t = last.edges
    alpha = total_densification(base_series).exponent
    node_counts = [float(g.number_of_nodes()) for g in base_series]
    v_next = node_counts[-1] + a_n * delta_n
    observed, stderr, predicted = [], [], []
    for a in a_e_grid:
        params = ModelParams(delta_n, a_n, a, p)
        coeffs = [_jaccard(e_t, g.edges) for g, _ in _replicas(base_series, params, runs, seed)]
        m, se = _mean_se(coeffs)
        observed.append(m)
        stderr.append(se)
        predicted.append(edge_stability_theorem(a, node_counts, v_next, alpha))
    return TheoremReport(
        "theorem2",
        "a_e",
        list(a_e_grid),
        predicted,
        observed,
        stderr,
        runs,
        _verdicts(observed, predicted),
        fixed={"delta_n": delta_n, "a_n": a_n, "p": p, "alpha": alpha},
    )


def _clustering_slope(base: GraphSeries, delta_n: int) -> Dict[str, float]:
    """Closed-form slope and intercept of mean clustering against p, for reference."""
    last = base.snapshots[-1]
    prep = prepare(base, delta_n)
    n_old_old = max(prep.delta_e - sum(k * c for k, c in prep.initial_degree_table.items()), 0)
    pk = degree_distribution(last).mass
    ck = local_clustering(last).by_degree
    pbar = prep.p_initial.mass
    v_next = last.number_of_nodes() + delta_n
    hit = 2 * n_old_old + delta_n
    a = (
        hit * sum(2 / (k * (k + 1)) * m for k, m in pk.items() if k > 0)
        + delta_n * sum(m / (k - 1) for k, m in pbar.items() if k > 1)
    ) / v_next
    b = (
        hit * sum(ck.get(k, 0.0) * (k - 1) / (k + 1) * m for k, m in pk.items())
        + (last.number_of_nodes() - hit) * sum(ck.get(k, 0.0) * m for k, m in pk.items())
    ) / v_next
    return {"slope": a, "intercept": b}


def validate_theorem3(
    base_series: GraphSeries,
    p_grid: Sequence[float] = DEFAULT_GRID,
    runs: int = 50,
    seed: int = 0,
    delta_n: Optional[int] = None,
    a_n: float = 0.9,
    a_e: float = 0.9,
) -> TheoremReport:
    """Mean local clustering of the generated step as a linear function of p."""
    _check(base_series, p_grid, runs, min_grid=4)
    if delta_n is None:
        delta_n = max(1, estimate_delta_n(base_series, min(3, len(base_series) - 1)))
    observed, stderr = [], []
    for p in p_grid:
        params = ModelParams(delta_n, a_n, a_e, p)
        values = [local_clustering(g).mean for g, _ in _replicas(base_series, params, runs, seed)]
        m, se = _mean_se(values)
        observed.append(m)
        stderr.append(se)
    x = np.asarray(p_grid, dtype=float)
    y = np.asarray(observed)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot else 1.0
    signs = np.sign(y - fitted)
    sign_runs = int(1 + np.count_nonzero(signs[1:] != signs[:-1]))
    closed_form = _clustering_slope(base_series, delta_n)
    return TheoremReport(
        "theorem3",
        "p",
        list(p_grid),
        [float(v) for v in fitted],
        observed,
        stderr,
        runs,
        ["PASS" if r2 >= 0.95 and slope > 0 else "DIVERGENT"] * len(observed),
        fixed={"delta_n": delta_n, "a_n": a_n, "a_e": a_e},
        extra={
            "slope": float(slope),
            "intercept": float(intercept),
            "r_squared": r2,
            "residual_sign_runs": sign_runs,
            "closed_form_slope": closed_form["slope"],
            "closed_form_intercept": closed_form["intercept"],
        },
    )


# -- graph comparison --------------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    degree_l1: float
    distance_l1: float
    clustering_l1: float

    def to_dict(self) -> dict:
        return {
            "degree_l1": self.degree_l1,
            "distance_l1": self.distance_l1,
            "clustering_l1": self.clustering_l1,
        }


def _l1(a: Dict, b: Dict) -> float:
    return float(sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in set(a) | set(b)))


def compare_graphs(
    a: Snapshot, b: Snapshot, sample_sources: Optional[int] = None, seed: int = 0
) -> ComparisonReport:
    """L1 distances between the degree, hop-distance and clustering distributions.

    The clustering term compares C(k)P(k), the per-degree contributions to
    the mean clustering, so all three distances lie in [0, 2].
    """
    if a.number_of_nodes() == 0 or b.number_of_nodes() == 0:
        raise DegenerateInputError("cannot compare an empty graph")
    deg_a, deg_b = degree_distribution(a).mass, degree_distribution(b).mass

    def dist(g):
        if g.number_of_nodes() < 2:
            return {"inf": 1.0}
        d = distance_distribution(g, sample_sources, seed)
        out = dict(d.mass)
        out["inf"] = d.unreachable_fraction
        return out

    def weighted_clustering(g, pk):
        ck = local_clustering(g).by_degree
        return {k: ck[k] * pk[k] for k in ck}

    return ComparisonReport(
        _l1(deg_a, deg_b),
        _l1(dist(a), dist(b)),
        _l1(weighted_clustering(a, deg_a), weighted_clustering(b, deg_b)),
    )


def degree_exponent(g: Snapshot, k_min: int = 1) -> float:
    """Slope of the log-log complementary degree CDF, minus one: the P(k) exponent."""
    degs = np.array([len(nb) for nb in g.adjacency.values()])
    ks = np.unique(degs[degs >= k_min])
    ccdf = [(k, float(np.mean(degs >= k))) for k in ks]
    return fit_power_law(ccdf).exponent - 1.0
