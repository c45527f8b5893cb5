"""Three-step snapshot generator: preparation, initialization, generation.

Randomness is drawn from one ``numpy.random.Generator`` in this fixed
order per step:

1. initialization coins, one per total-graph node (sorted by row), then one
   per total-graph edge;
2. initial degrees of the heavy-tail new nodes;
3. the old source nodes (uniform, with replacement);
4. the permutation of the source list;
5. per source, the distance class and the target inside the class.

The same seed therefore always yields the same output.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import DegenerateInputError, GenerationError, InvalidParameterError, UnknownNodeError
from .graph import NodeId, Snapshot
from .params import ModelParams
from .patterns import InitialDegreeDistribution, PowerLawFit, initial_degree_distribution, total_densification
from .series import GraphSeries, StateSequence, TotalGraph

# fraction of total attachment weight below which the unreachable set is
# enumerated instead of rejection-sampled
_ENUMERATE_BELOW = 0.05
REJECTION_BUDGET_PER_NODE = 100


# -- preparation -------------------------------------------------------------


def threshold_degree(p_initial: InitialDegreeDistribution) -> int:
    """Largest k with P(j) > 0 and P(j) > P(j+1) for every 1 <= j <= k (at least 1)."""
    k_s = 0
    k = 1
    while p_initial[k] > 0 and p_initial[k] > p_initial[k + 1]:
        k_s = k
        k += 1
    return max(k_s, 1)


@dataclass(frozen=True)
class PreparedStep:
    total: TotalGraph
    delta_n: int
    delta_e: int
    initial_degree_table: Dict[int, int]
    k_s: int
    p_initial: InitialDegreeDistribution
    n_tail: int
    tail_range: Tuple[int, int]
    fit: PowerLawFit

    def draw_tail(self, rng: np.random.Generator) -> List[int]:
        lo, hi = self.tail_range
        if self.n_tail == 0:
            return []
        return [int(k) for k in rng.integers(lo, hi + 1, size=self.n_tail)]

    def degree_sequence(self, tail: Sequence[int]) -> List[int]:
        """Initial degree of each new node: table part ascending in k, then the tail."""
        fixed = [k for k, c in sorted(self.initial_degree_table.items()) for _ in range(c)]
        return fixed + list(tail)


def edge_budget(fit: PowerLawFit, n_total: int, delta_n: int, alpha_factor: bool = False) -> int:
    """New-edge count A' N^(alpha'-1) dN, rounded half up.

    With ``alpha_factor`` the derivative of the total law is used instead,
    i.e. an extra factor alpha'.
    """
    raw = fit.coefficient * n_total ** (fit.exponent - 1.0) * delta_n
    if alpha_factor:
        raw *= fit.exponent
    return int(math.floor(raw + 0.5))


def prepare(
    series: GraphSeries,
    delta_n: int,
    alpha_factor: bool = False,
) -> PreparedStep:
    if len(series) < 2:
        raise DegenerateInputError("preparation needs at least two snapshots")
    if delta_n < 1:
        raise InvalidParameterError("delta_n must be at least 1 to generate a step")
    total = series.total
    fit = total_densification(series)
    delta_e = edge_budget(fit, total.number_of_nodes(), delta_n, alpha_factor)

    p_init = initial_degree_distribution(series)
    k_s = threshold_degree(p_init)
    table = {
        k: int(math.floor(delta_n * p_init[k] + 0.5))
        for k in range(0, k_s + 1)
        if p_init[k] > 0
    }
    # rounding can overshoot delta_n; trim from the largest degrees
    excess = sum(table.values()) - delta_n
    for k in sorted(table, reverse=True):
        if excess <= 0:
            break
        cut = min(excess, table[k])
        table[k] -= cut
        excess -= cut
    table = {k: c for k, c in table.items() if c > 0}
    n_tail = delta_n - sum(table.values())
    hi = int(math.floor(delta_n * p_init.max_initial_degree / p_init.max_new_nodes_per_step))
    tail_range = (k_s + 1, max(hi, k_s + 1))
    return PreparedStep(total, delta_n, delta_e, table, k_s, p_init, n_tail, tail_range, fit)


# -- initialization ----------------------------------------------------------


def state_weights(n: int, a: float) -> np.ndarray:
    """Weights p_0..p_n: p_0 = (1-a)^n, p_i = a (1-a)^(n-i)."""
    if not 0.0 < a <= 1.0:
        raise InvalidParameterError(f"stable factor must lie in (0, 1], got {a}")
    i = np.arange(n + 1)
    w = a * np.power(1.0 - a, n - i)
    w[0] = (1.0 - a) ** n
    return w


def expected_state(states: StateSequence, a: float) -> float:
    """Probability-weighted mean of a state sequence s_0..s_n."""
    s = np.asarray(states, dtype=float)
    if len(s) == 0 or s[0] != 0:
        raise InvalidParameterError("state sequences start with s_0 = 0")
    return float(state_weights(len(s) - 1, a) @ s)


# nodes and edges share the same weighting; the two names mirror the model
expected_node_state = expected_state
expected_edge_state = expected_state


def expected_states(states: np.ndarray, a: float) -> np.ndarray:
    """Row-wise expected state of a boolean state matrix."""
    n = states.shape[1] - 1
    return states.astype(float) @ state_weights(n, a)


def initialize(total: TotalGraph, a_n: float, a_e: float, rng: np.random.Generator) -> Snapshot:
    """Keep each total-graph node, then edge, with probability its expected state.

    An edge also needs both endpoints kept.
    """
    node_p = expected_states(total.node_states, a_n)
    edge_p = expected_states(total.edge_states, a_e)
    keep_node = rng.random(len(node_p)) < node_p
    keep_edge = rng.random(len(edge_p)) < edge_p
    if len(edge_p):
        ru, rv = total.edge_endpoint_rows
        keep_edge &= keep_node[ru] & keep_node[rv]
    nodes = total.node_ids[keep_node]
    edges = total.edge_list[keep_edge]
    return Snapshot.from_edges(edges.tolist(), nodes.tolist(), time_index=total.up_to + 1)


# -- distance guided attachment ----------------------------------------------


class WorkingGraph:
    """Mutable adjacency used while a step is being generated.

    ``stubs`` lists every node deg+1 times so a uniform pick from it is a
    pick proportional to deg+1.
    """

    def __init__(self, adjacency: Dict[NodeId, Set[NodeId]]):
        self.adj = adjacency
        self.stubs: List[NodeId] = []
        for v in sorted(adjacency):
            self.stubs.extend([v] * (len(adjacency[v]) + 1))

    @classmethod
    def from_snapshot(cls, g: Snapshot) -> "WorkingGraph":
        return cls({v: set(nb) for v, nb in g.adjacency.items()})

    def add_node(self, v: NodeId) -> None:
        if v in self.adj:
            raise GenerationError(f"node {v} already present")
        self.adj[v] = set()
        self.stubs.append(v)

    def add_edge(self, u: NodeId, v: NodeId) -> None:
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.stubs.append(u)
        self.stubs.append(v)

    def weight(self, v: NodeId) -> int:
        return len(self.adj[v]) + 1

    @property
    def total_weight(self) -> int:
        return len(self.stubs)

    def to_snapshot(self, time_index: int) -> Snapshot:
        return Snapshot({v: frozenset(nb) for v, nb in self.adj.items()}, time_index)


class _Levels:
    """BFS layers from one source, expanded only as deep as requested."""

    def __init__(self, wg: WorkingGraph, source: NodeId):
        self.wg = wg
        self.levels: List[List[NodeId]] = [[source]]
        self.visited: Set[NodeId] = {source}
        self.exhausted = False
        self._unreachable: Optional[List[NodeId]] = None
        self._unreachable_weight: Optional[int] = None

    def level(self, d: int) -> Optional[List[NodeId]]:
        adj = self.wg.adj
        visited = self.visited
        while len(self.levels) <= d and not self.exhausted:
            nxt = []
            for u in self.levels[-1]:
                for w in adj[u]:
                    if w not in visited:
                        visited.add(w)
                        nxt.append(w)
            if nxt:
                self.levels.append(nxt)
            else:
                self.exhausted = True
        return self.levels[d] if d < len(self.levels) else None

    @property
    def d_max(self) -> int:
        self.level(len(self.wg.adj))
        return len(self.levels) - 1

    def unreachable_weight(self) -> int:
        if self._unreachable_weight is None:
            self.level(len(self.wg.adj))
            reach = sum(self.wg.weight(v) for v in self.visited)
            self._unreachable_weight = self.wg.total_weight - reach
        return self._unreachable_weight

    def unreachable(self) -> List[NodeId]:
        if self._unreachable is None:
            self._unreachable = sorted(v for v in self.wg.adj if v not in self.visited)
        return self._unreachable


def _pick_weighted(nodes: Sequence[NodeId], wg: WorkingGraph, rng: np.random.Generator) -> NodeId:
    cum = list(accumulate(len(wg.adj[v]) + 1 for v in nodes))
    r = rng.random() * cum[-1]
    return nodes[min(bisect_right(cum, r), len(nodes) - 1)]


def _truncated_geometric(p: float, d_max: int, rng: np.random.Generator) -> int:
    weights = [p * (1 - p) ** (d - 2) for d in range(2, d_max + 1)]
    cum = list(accumulate(weights))
    r = rng.random() * cum[-1]
    return 2 + min(bisect_right(cum, r), len(weights) - 1)


def _draw_target(levels: _Levels, p: float, rng: np.random.Generator) -> Tuple[NodeId, Optional[int]]:
    """One target draw; returns (target, distance class) with None for the unreachable set.

    Drawing D ~ 2 + Geometric(p) and taking the unreachable set when D
    exceeds the source's eccentricity gives class d with probability
    f(d) = p(1-p)^(d-2) and the unreachable set with the residual
    1 - sum_{d<=d_max} f(d), so BFS only has to reach depth D.
    """
    wg = levels.wg
    d = 1 + int(rng.geometric(p))
    layer = levels.level(d)
    if layer is not None:
        return _pick_weighted(layer, wg, rng), d
    inf_weight = levels.unreachable_weight()
    if inf_weight > 0:
        if inf_weight >= _ENUMERATE_BELOW * wg.total_weight:
            stubs = wg.stubs
            visited = levels.visited
            n = len(stubs)
            while True:
                v = stubs[int(rng.random() * n)]
                if v not in visited:
                    return v, None
        return _pick_weighted(levels.unreachable(), wg, rng), None
    d_max = levels.d_max
    if d_max < 2:
        raise GenerationError("no eligible target: source is adjacent to its whole component")
    d = _truncated_geometric(p, d_max, rng)
    return _pick_weighted(levels.level(d), wg, rng), d


def attach(
    wg: WorkingGraph,
    source: NodeId,
    p: float,
    rng: np.random.Generator,
    forbidden: Optional[Set[NodeId]] = None,
    budget: Optional[List[int]] = None,
) -> Tuple[NodeId, Optional[int]]:
    """Distance guided attachment on a working graph, redrawing forbidden targets.

    ``budget`` is a one-element list holding the remaining failed draws
    allowed; it is decremented in place.
    """
    if source not in wg.adj:
        raise UnknownNodeError(f"source {source} not in graph")
    levels = _Levels(wg, source)
    while True:
        target, d = _draw_target(levels, p, rng)
        if forbidden is None or target not in forbidden:
            return target, d
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise GenerationError("rejection budget exhausted while attaching old sources")


def distance_guided_attachment(g: Snapshot, source: NodeId, p: float, rng: np.random.Generator) -> NodeId:
    """Pick a non-neighbor target for ``source``.

    The distance class d >= 2 is chosen with probability p(1-p)^(d-2), the
    unreachable set with the remaining mass; empty classes are dropped and
    the rest renormalized.  Inside a class a node is picked proportionally
    to its degree + 1.
    """
    if not 0.0 < p <= 1.0:
        raise InvalidParameterError(f"p must lie in (0, 1], got {p}")
    if source not in g:
        raise UnknownNodeError(f"source {source} not in snapshot")
    return attach(WorkingGraph.from_snapshot(g), source, p, rng)[0]


# -- generation --------------------------------------------------------------


@dataclass
class StepAudit:
    """Bookkeeping collected while one step is generated."""

    delta_e: int
    survivors: int
    new_nodes: List[NodeId]
    new_old_stubs: int
    old_old_sources: int
    edges_added: int = 0
    rejections: int = 0
    clamped: bool = False
    old_old_distances: Dict[Optional[int], int] = field(default_factory=dict)


def generate_step_detailed(
    series: GraphSeries,
    params: ModelParams,
    rng: np.random.Generator,
    alpha_factor: bool = False,
) -> Tuple[Snapshot, StepAudit]:
    prep = prepare(series, params.delta_n, alpha_factor=alpha_factor)
    total = prep.total
    time_index = series.snapshots[-1].time_index + 1

    init = initialize(total, params.a_n, params.a_e, rng)
    degrees = prep.degree_sequence(prep.draw_tail(rng))

    wg = WorkingGraph.from_snapshot(init)
    old_nodes = sorted(init.nodes)
    next_id = int(total.node_ids.max()) + 1 if total.number_of_nodes() else 0
    new_nodes = list(range(next_id, next_id + len(degrees)))
    for v in new_nodes:
        wg.add_node(v)

    stub_count = sum(degrees)
    n_old_old = prep.delta_e - stub_count
    clamped = n_old_old < 0
    n_old_old = max(n_old_old, 0)
    if not old_nodes:
        n_old_old = 0
    old_sources = (
        [old_nodes[j] for j in rng.integers(len(old_nodes), size=n_old_old)] if n_old_old else []
    )
    sources = [v for v, k in zip(new_nodes, degrees) for _ in range(k)] + old_sources
    order = rng.permutation(len(sources))

    audit = StepAudit(
        delta_e=prep.delta_e,
        survivors=init.number_of_nodes(),
        new_nodes=new_nodes,
        new_old_stubs=stub_count,
        old_old_sources=len(old_sources),
        clamped=clamped,
    )
    new_set = set(new_nodes)
    budget = [REJECTION_BUDGET_PER_NODE * len(wg.adj)]
    start_budget = budget[0]
    distances: Dict[Optional[int], int] = {}
    for j in order:
        source = sources[j]
        is_old = source not in new_set
        target, d = attach(
            wg, source, params.p, rng, forbidden=new_set if is_old else None, budget=budget
        )
        wg.add_edge(source, target)
        audit.edges_added += 1
        if is_old:
            distances[d] = distances.get(d, 0) + 1
    audit.rejections = start_budget - budget[0]
    audit.old_old_distances = distances
    return wg.to_snapshot(time_index), audit


def generate_step(
    series: GraphSeries,
    params: ModelParams,
    rng: np.random.Generator,
    alpha_factor: bool = False,
) -> Snapshot:
    """Infer G_{n+1} from G_1..G_n."""
    return generate_step_detailed(series, params, rng, alpha_factor)[0]


@dataclass(frozen=True)
class GeneratorConfig:
    params: ModelParams
    seed: int
    steps: int = 1
    alpha_factor: bool = False

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidParameterError("steps must be at least 1")


def generate_series(
    series: GraphSeries, config: GeneratorConfig, audits: Optional[List[StepAudit]] = None
) -> List[Snapshot]:
    """Generate ``config.steps`` snapshots, each conditioned on all earlier ones."""
    rng = np.random.default_rng(config.seed)
    series.total  # warm the cache so appends extend it incrementally
    out = []
    current = series
    for _ in range(config.steps):
        g, audit = generate_step_detailed(current, config.params, rng, config.alpha_factor)
        if audits is not None:
            audits.append(audit)
        out.append(g)
        current = current.append(g)
    return out
