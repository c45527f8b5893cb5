"""Static and dynamic graph patterns.

Static patterns are computed on one snapshot: degree distribution, hop
distance distribution and degree-resolved local clustering.  Dynamic
patterns need a series: the densification laws for snapshots and for the
total graph, the share of new-new edges, the initial degree distribution of
new nodes and the prior-distance profile of new old-old edges.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import DegenerateInputError, IndexRangeError, InvalidParameterError
from .graph import Snapshot
from .series import GraphSeries, classify_new_edges, initial_degrees, new_node_counts

MIN_P = 1e-6
_CHUNK = 256


@dataclass(frozen=True)
class PowerLawFit:
    coefficient: float
    exponent: float
    r_squared: float
    n_points: int

    def __call__(self, x):
        return self.coefficient * np.power(x, self.exponent)

    def to_dict(self) -> dict:
        return {
            "coefficient": self.coefficient,
            "exponent": self.exponent,
            "r_squared": self.r_squared,
            "n_points": self.n_points,
        }


@dataclass(frozen=True)
class DegreeDistribution:
    mass: Dict[int, float]

    def __getitem__(self, k: int) -> float:
        return self.mass.get(k, 0.0)


@dataclass(frozen=True)
class DistanceDistribution:
    mass: Dict[int, float]
    unreachable_fraction: float

    def __getitem__(self, x: int) -> float:
        return self.mass.get(x, 0.0)


@dataclass(frozen=True)
class ClusteringProfile:
    by_degree: Dict[int, float]
    mean: float


@dataclass(frozen=True)
class InitialDegreeDistribution:
    mass: Dict[int, float]
    max_initial_degree: int
    max_new_nodes_per_step: int
    n_nodes: int = 0

    def __getitem__(self, k: int) -> float:
        return self.mass.get(k, 0.0)


@dataclass(frozen=True)
class DistanceEdgeProfile:
    """Prior hop distance of new old-old edges, as counts and fractions."""

    counts: Dict[int, int]
    n_infinite: int

    @property
    def n_edges(self) -> int:
        return sum(self.counts.values()) + self.n_infinite

    @property
    def mass(self) -> Dict[int, float]:
        n = self.n_edges
        return {d: c / n for d, c in sorted(self.counts.items())} if n else {}

    @property
    def infinite_fraction(self) -> float:
        n = self.n_edges
        return self.n_infinite / n if n else 0.0

    def finite_mass(self) -> Dict[int, float]:
        """Distribution conditioned on a finite prior distance."""
        n = sum(self.counts.values())
        return {d: c / n for d, c in sorted(self.counts.items())} if n else {}

    def __add__(self, other: "DistanceEdgeProfile") -> "DistanceEdgeProfile":
        counts = Counter(self.counts)
        counts.update(other.counts)
        return DistanceEdgeProfile(dict(counts), self.n_infinite + other.n_infinite)


# -- static patterns ---------------------------------------------------------


def degree_distribution(g: Snapshot) -> DegreeDistribution:
    n = g.number_of_nodes()
    if n == 0:
        raise DegenerateInputError("degree distribution of an empty graph")
    counts = Counter(len(nb) for nb in g.adjacency.values())
    return DegreeDistribution({k: c / n for k, c in sorted(counts.items())})


def _hop_histogram(g: Snapshot, sources: Optional[np.ndarray]) -> Tuple[np.ndarray, int, int]:
    """Histogram of finite hop distances from ``sources`` (all nodes if None).

    Returns (counts indexed by distance, unreachable count, number of ordered pairs).
    """
    mat, ids = g.to_csr()
    n = len(ids)
    src = np.arange(n) if sources is None else sources
    hist = np.zeros(1, dtype=np.int64)
    unreachable = 0
    for start in range(0, len(src), _CHUNK):
        chunk = src[start : start + _CHUNK]
        dist = shortest_path(mat, directed=False, unweighted=True, indices=chunk)
        finite = np.isfinite(dist)
        unreachable += int((~finite).sum())
        d = dist[finite].astype(np.int64)
        h = np.bincount(d)
        if len(h) > len(hist):
            hist = np.pad(hist, (0, len(h) - len(hist)))
        hist[: len(h)] += h
    return hist, unreachable, len(src) * (n - 1)


def distance_distribution(
    g: Snapshot, sample_sources: Optional[int] = None, seed: int = 0
) -> DistanceDistribution:
    """Fraction of node pairs at each hop distance.

    Exact over all n(n-1)/2 pairs unless ``sample_sources`` is given, in
    which case BFS runs from that many random sources and the ordered pairs
    (source, other) form the denominator.
    """
    n = g.number_of_nodes()
    if n < 2:
        raise DegenerateInputError("distance distribution needs at least two nodes")
    if sample_sources is not None:
        if sample_sources < 1:
            raise InvalidParameterError("sample_sources must be positive")
        k = min(int(sample_sources), n)
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(n, size=k, replace=False))
    else:
        sources = None
    hist, unreachable, pairs = _hop_histogram(g, sources)
    mass = {int(d): int(c) / pairs for d, c in enumerate(hist) if d > 0 and c > 0}
    return DistanceDistribution(mass, unreachable / pairs)


def local_clustering(g: Snapshot) -> ClusteringProfile:
    """Degree-resolved local clustering C(k) and its P(k)-weighted mean."""
    n = g.number_of_nodes()
    if n == 0:
        raise DegenerateInputError("clustering of an empty graph")
    adj = g.adjacency
    links_by_k: Dict[int, int] = Counter()
    nodes_by_k: Dict[int, int] = Counter()
    for v, nb in adj.items():
        k = len(nb)
        nodes_by_k[k] += 1
        if k < 2:
            continue
        links_by_k[k] += sum(len(nb & adj[u]) for u in nb)  # each link counted twice
    by_degree = {}
    for k, count in sorted(nodes_by_k.items()):
        if k < 2:
            by_degree[k] = 0.0
        else:
            mean_links = links_by_k[k] / 2 / count
            by_degree[k] = mean_links / (k * (k - 1) / 2)
    mean = sum(by_degree[k] * nodes_by_k[k] / n for k in by_degree)
    return ClusteringProfile(by_degree, mean)


# -- power-law fitting -------------------------------------------------------


def fit_power_law(points: Iterable[Tuple[float, float]]) -> PowerLawFit:
    """Least squares of ln y on ln x; returns y = coefficient * x**exponent."""
    pts = np.asarray(list(points), dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        raise DegenerateInputError("power-law fit needs at least two points")
    if np.any(pts <= 0):
        raise InvalidParameterError("power-law fit needs positive coordinates")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    sxx = np.sum((lx - lx.mean()) ** 2)
    if sxx <= 0 or np.unique(pts[:, 0]).size < 2:
        raise DegenerateInputError("power-law fit needs two distinct x values")
    slope = float(np.sum((lx - lx.mean()) * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (intercept + slope * lx)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return PowerLawFit(math.exp(intercept), slope, r2, len(pts))


def densification(series: GraphSeries) -> PowerLawFit:
    """|E_i| = A |N_i|^alpha over the snapshots."""
    if len(series) < 2:
        raise DegenerateInputError("densification needs at least two snapshots")
    return fit_power_law(
        (g.number_of_nodes(), g.number_of_edges()) for g in series
    )


def total_growth(series: GraphSeries) -> List[Tuple[int, int]]:
    """(|N_i^Total|, |E_i^Total|) for i = 1..n."""
    total = series.total
    nodes = np.cumsum(np.bincount(total.node_first_seen, minlength=len(series) + 1))[1:]
    edges = np.cumsum(np.bincount(total.edge_first_seen, minlength=len(series) + 1))[1:]
    return [(int(a), int(b)) for a, b in zip(nodes, edges)]


def total_densification(series: GraphSeries) -> PowerLawFit:
    """|E_i^Total| = A' |N_i^Total|^alpha' over the total graphs."""
    if len(series) < 2:
        raise DegenerateInputError("densification needs at least two snapshots")
    return fit_power_law(total_growth(series))


# -- dynamic patterns --------------------------------------------------------


def new_new_fraction(series: GraphSeries, i: int) -> float:
    if not 2 <= i <= len(series):
        raise IndexRangeError(f"new-new fraction defined for 2..{len(series)}, got {i}")
    counts = classify_new_edges(series, i).counts
    if counts.total == 0:
        raise DegenerateInputError(f"no new edges at step {i}")
    return counts.new_new / counts.total


def initial_degree_distribution(series: GraphSeries) -> InitialDegreeDistribution:
    """Initial degrees of every node first seen at t_2..t_n."""
    if len(series) < 2:
        raise DegenerateInputError("initial degree distribution needs two snapshots")
    degs = initial_degrees(series, start=2)
    if not degs:
        raise DegenerateInputError("no new nodes after the first snapshot")
    counts = Counter(degs.values())
    n = len(degs)
    new_per_step = new_node_counts(series)[1:]
    return InitialDegreeDistribution(
        {k: c / n for k, c in sorted(counts.items())},
        max(counts),
        int(new_per_step.max()),
        n,
    )


def _prior_distances(prev: Snapshot, edges: Sequence[Tuple[int, int]]) -> List[Optional[int]]:
    """Hop distance in ``prev`` between the endpoints of each edge (None if unreachable)."""
    out: List[Optional[int]] = [None] * len(edges)
    by_source: Dict[int, List[int]] = {}
    for j, (u, v) in enumerate(edges):
        if u in prev and v in prev:
            by_source.setdefault(u, []).append(j)
    if not by_source:
        return out
    mat, ids = prev.to_csr()
    index = {int(v): i for i, v in enumerate(ids)}
    sources = sorted(by_source)
    for start in range(0, len(sources), _CHUNK):
        chunk = sources[start : start + _CHUNK]
        dist = shortest_path(
            mat, directed=False, unweighted=True, indices=[index[s] for s in chunk]
        )
        for row, s in enumerate(chunk):
            for j in by_source[s]:
                d = dist[row, index[edges[j][1]]]
                if np.isfinite(d):
                    out[j] = int(d)
    return out


def new_edge_distance_profile(series: GraphSeries, i: int) -> DistanceEdgeProfile:
    """Bucket each new old-old edge at t_i by its endpoints' distance in G_{i-1}."""
    if not 2 <= i <= len(series):
        raise IndexRangeError(f"distance profile defined for 2..{len(series)}, got {i}")
    edges = sorted(classify_new_edges(series, i).old_old)
    if not edges:
        raise DegenerateInputError(f"no new old-old edges at step {i}")
    counts: Counter = Counter()
    infinite = 0
    for d in _prior_distances(series.at(i - 1), edges):
        if d is None:
            infinite += 1
        else:
            counts[d] += 1
    return DistanceEdgeProfile(dict(sorted(counts.items())), infinite)


def pooled_distance_profile(series: GraphSeries, steps: Optional[Iterable[int]] = None) -> DistanceEdgeProfile:
    """Sum of the per-step profiles; steps without old-old edges are skipped."""
    steps = range(2, len(series) + 1) if steps is None else steps
    pooled = DistanceEdgeProfile({}, 0)
    for i in steps:
        try:
            pooled = pooled + new_edge_distance_profile(series, i)
        except DegenerateInputError:
            continue
    return pooled


def fit_clustering_factor(profile: DistanceEdgeProfile) -> float:
    """Moment estimate of p in f(d) = p(1-p)^(d-2): p = 1 / (mean finite d - 1)."""
    finite = sum(profile.counts.values())
    if finite == 0:
        raise DegenerateInputError("profile has no finite-distance edges")
    mean_d = sum(d * c for d, c in profile.counts.items()) / finite
    return min(1.0, max(MIN_P, 1.0 / (mean_d - 1.0)))


def geometric_profile(p: float, d_max: int) -> Dict[int, float]:
    """f(d) = p(1-p)^(d-2) for d = 2..d_max."""
    return {d: p * (1 - p) ** (d - 2) for d in range(2, d_max + 1)}


def profile_l1(profile: DistanceEdgeProfile, p: float) -> float:
    """L1 distance between the finite-conditioned profile and f(d), tail of f included."""
    q = profile.finite_mass()
    if not q:
        raise DegenerateInputError("profile has no finite-distance edges")
    d_max = max(q)
    f = geometric_profile(p, d_max)
    head = sum(abs(q.get(d, 0.0) - f[d]) for d in f)
    return head + (1 - p) ** (d_max - 1)


# -- report ------------------------------------------------------------------


@dataclass
class PatternReport:
    densification: Optional[PowerLawFit]
    total_densification: Optional[PowerLawFit]
    growth: List[Tuple[int, int, int, int]]  # per step: |N_i|, |E_i|, total |N|, total |E|
    new_new_fraction: Dict[int, Optional[float]]
    initial_degrees: Optional[InitialDegreeDistribution]
    initial_degree_fit: Optional[PowerLawFit]
    distance_profiles: Dict[int, DistanceEdgeProfile]
    pooled_profile: DistanceEdgeProfile
    clustering_factor: Optional[float]
    degree: DegreeDistribution
    distances: DistanceDistribution
    clustering: ClusteringProfile
    notes: List[str] = field(default_factory=list)


def _maybe(fn, notes: List[str], label: str):
    try:
        return fn()
    except (DegenerateInputError, InvalidParameterError) as exc:
        notes.append(f"{label}: {exc}")
        return None


def analyze_series(
    series: GraphSeries, sample_sources: Optional[int] = None, seed: int = 0
) -> PatternReport:
    """Every static pattern (on the last snapshot) and every dynamic pattern."""
    notes: List[str] = []
    last = series.snapshots[-1]
    totals = total_growth(series)
    growth = [
        (g.number_of_nodes(), g.number_of_edges(), tn, te)
        for g, (tn, te) in zip(series, totals)
    ]
    nn = {}
    profiles = {}
    for i in range(2, len(series) + 1):
        nn[i] = _maybe(lambda: new_new_fraction(series, i), notes, f"new_new_fraction[{i}]")
        prof = _maybe(lambda: new_edge_distance_profile(series, i), notes, f"distance_profile[{i}]")
        if prof is not None:
            profiles[i] = prof
    pooled = DistanceEdgeProfile({}, 0)
    for prof in profiles.values():
        pooled = pooled + prof
    init = _maybe(lambda: initial_degree_distribution(series), notes, "initial_degrees")
    init_fit = None
    if init is not None:
        pts = [(k, m) for k, m in init.mass.items() if k > 0]
        init_fit = _maybe(lambda: fit_power_law(pts), notes, "initial_degree_fit")
    return PatternReport(
        densification=_maybe(lambda: densification(series), notes, "densification"),
        total_densification=_maybe(lambda: total_densification(series), notes, "total_densification"),
        growth=growth,
        new_new_fraction=nn,
        initial_degrees=init,
        initial_degree_fit=init_fit,
        distance_profiles=profiles,
        pooled_profile=pooled,
        clustering_factor=_maybe(lambda: fit_clustering_factor(pooled), notes, "clustering_factor"),
        degree=degree_distribution(last),
        distances=_maybe(
            lambda: distance_distribution(last, sample_sources, seed), notes, "distances"
        ) or DistanceDistribution({}, 0.0),
        clustering=local_clustering(last),
        notes=notes,
    )
