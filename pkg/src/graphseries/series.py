"""Snapshot time series, the union ("total") graph and new/old classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Tuple

import numpy as np

from .errors import DegenerateInputError, IndexRangeError, UnknownNodeError
from .graph import Edge, NodeId, Snapshot

StateSequence = Tuple[int, ...]


@dataclass(frozen=True)
class GraphSeries:
    """Ordered snapshots G_1..G_n; indices used by the API are 1-based."""

    snapshots: Tuple[Snapshot, ...]

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        object.__setattr__(self, "snapshots", snaps)
        if not snaps:
            raise DegenerateInputError("a series needs at least one snapshot")
        for a, b in zip(snaps, snaps[1:]):
            if b.time_index <= a.time_index:
                raise DegenerateInputError(
                    f"time indices must increase strictly ({a.time_index} -> {b.time_index})"
                )

    @classmethod
    def from_snapshots(cls, snapshots: Iterable[Snapshot], renumber: bool = True) -> "GraphSeries":
        snaps = list(snapshots)
        if renumber:
            snaps = [g.with_time_index(i) for i, g in enumerate(snaps, start=1)]
        return cls(tuple(snaps))

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def at(self, i: int) -> Snapshot:
        """Snapshot G_i, 1-based."""
        self._check_index(i)
        return self.snapshots[i - 1]

    def append(self, g: Snapshot) -> "GraphSeries":
        extended = GraphSeries(self.snapshots + (g,))
        if "total" in self.__dict__:
            # extend the cached union instead of rebuilding it
            extended.__dict__["total"] = self.total.with_snapshot(g)
        return extended

    def prefix(self, i: int) -> "GraphSeries":
        self._check_index(i)
        return GraphSeries(self.snapshots[:i])

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= len(self.snapshots):
            raise IndexRangeError(f"index {i} outside 1..{len(self.snapshots)}")

    @cached_property
    def total(self) -> "TotalGraph":
        return build_total_graph(self)


class TotalGraph:
    """Union of G_1..G_i with a presence bit-vector per node and per edge.

    Column 0 of each state matrix is the fixed initial state s_0 = 0;
    column k records membership in G_k.
    """

    def __init__(
        self,
        node_ids: np.ndarray,
        node_states: np.ndarray,
        edge_list: np.ndarray,
        edge_states: np.ndarray,
    ):
        self.node_ids = node_ids
        self.node_states = node_states
        self.edge_list = edge_list
        self.edge_states = edge_states
        self._node_index = {int(v): i for i, v in enumerate(node_ids)}
        self._edge_index = {(int(u), int(v)): i for i, (u, v) in enumerate(edge_list)}

    @property
    def up_to(self) -> int:
        return self.node_states.shape[1] - 1

    def number_of_nodes(self) -> int:
        return len(self.node_ids)

    def number_of_edges(self) -> int:
        return len(self.edge_list)

    @property
    def nodes(self) -> List[NodeId]:
        return [int(v) for v in self.node_ids]

    @property
    def edges(self) -> List[Edge]:
        return [(int(u), int(v)) for u, v in self.edge_list]

    def has_node(self, v: NodeId) -> bool:
        return v in self._node_index

    def has_edge(self, e: Edge) -> bool:
        return e in self._edge_index

    def node_index(self, v: NodeId) -> int:
        try:
            return self._node_index[v]
        except KeyError:
            raise UnknownNodeError(f"node {v} never appears in the series") from None

    def edge_index(self, e: Edge) -> int:
        try:
            return self._edge_index[e]
        except KeyError:
            raise UnknownNodeError(f"edge {e} never appears in the series") from None

    def node_state(self, v: NodeId) -> StateSequence:
        return tuple(int(b) for b in self.node_states[self.node_index(v)])

    def edge_state(self, e: Edge) -> StateSequence:
        u, v = e
        key = (u, v) if u < v else (v, u)
        return tuple(int(b) for b in self.edge_states[self.edge_index(key)])

    @cached_property
    def node_first_seen(self) -> np.ndarray:
        """Index of the first snapshot containing each node (row-aligned with ``node_ids``)."""
        return self.node_states.argmax(axis=1)

    @cached_property
    def edge_first_seen(self) -> np.ndarray:
        return self.edge_states.argmax(axis=1)

    @cached_property
    def edge_endpoint_rows(self) -> Tuple[np.ndarray, np.ndarray]:
        """Row indices into ``node_ids`` of each edge's two endpoints."""
        sorter = np.argsort(self.node_ids, kind="stable")
        pos = np.searchsorted(self.node_ids, self.edge_list, sorter=sorter)
        rows = sorter[pos.reshape(-1, 2)] if len(self.edge_list) else pos.reshape(-1, 2)
        return rows[:, 0], rows[:, 1]

    def prefix(self, i: int) -> "TotalGraph":
        """Total graph through G_i; elements first seen after i are dropped."""
        if not 0 <= i <= self.up_to:
            raise IndexRangeError(f"prefix {i} outside 0..{self.up_to}")
        nk = self.node_first_seen <= i if i > 0 else np.zeros(len(self.node_ids), bool)
        ek = self.edge_first_seen <= i if i > 0 else np.zeros(len(self.edge_list), bool)
        return TotalGraph(
            self.node_ids[nk],
            self.node_states[nk, : i + 1].copy(),
            self.edge_list[ek],
            self.edge_states[ek, : i + 1].copy(),
        )

    def with_snapshot(self, g: Snapshot) -> "TotalGraph":
        """Total graph extended by one more snapshot (incremental union)."""
        node_ids = list(self.node_ids)
        extra_nodes = sorted(v for v in g.nodes if v not in self._node_index)
        node_ids = np.array(node_ids + extra_nodes, dtype=np.int64)
        extra_edges = sorted(e for e in g.edges if e not in self._edge_index)
        edge_list = np.concatenate(
            [self.edge_list.reshape(-1, 2), np.array(extra_edges, dtype=np.int64).reshape(-1, 2)]
        )

        ns = np.zeros((len(node_ids), self.up_to + 2), dtype=bool)
        ns[: self.node_states.shape[0], : self.up_to + 1] = self.node_states
        index = dict(self._node_index)
        for j, v in enumerate(extra_nodes, start=len(self.node_ids)):
            index[v] = j
        ns[[index[v] for v in g.nodes], -1] = True

        es = np.zeros((len(edge_list), self.up_to + 2), dtype=bool)
        es[: self.edge_states.shape[0], : self.up_to + 1] = self.edge_states
        eindex = dict(self._edge_index)
        for j, e in enumerate(extra_edges, start=len(self.edge_list)):
            eindex[e] = j
        if g.number_of_edges():
            es[[eindex[e] for e in g.edges], -1] = True
        return TotalGraph(node_ids, ns, edge_list, es)


def _empty_total() -> TotalGraph:
    return TotalGraph(
        np.zeros(0, dtype=np.int64),
        np.zeros((0, 1), dtype=bool),
        np.zeros((0, 2), dtype=np.int64),
        np.zeros((0, 1), dtype=bool),
    )


def build_total_graph(series: GraphSeries) -> TotalGraph:
    """Union graph of the whole series with per-element state sequences."""
    total = _empty_total()
    for g in series:
        total = total.with_snapshot(g)
    return total


class EdgeClassCounts(NamedTuple):
    new_new: int
    new_old: int
    old_old: int

    @property
    def total(self) -> int:
        return self.new_new + self.new_old + self.old_old


@dataclass(frozen=True)
class NewEdges:
    counts: EdgeClassCounts
    new_new: FrozenSet[Edge] = field(default_factory=frozenset)
    new_old: FrozenSet[Edge] = field(default_factory=frozenset)
    old_old: FrozenSet[Edge] = field(default_factory=frozenset)


def _check_step(series: GraphSeries, i: int) -> None:
    if not 1 <= i <= len(series):
        raise IndexRangeError(f"index {i} outside 1..{len(series)}")


def classify_new_nodes(series: GraphSeries, i: int) -> FrozenSet[NodeId]:
    """Nodes of V_i^Total absent from V_{i-1}^Total."""
    _check_step(series, i)
    total = series.total
    return frozenset(int(v) for v in total.node_ids[total.node_first_seen == i])


def classify_old_nodes(series: GraphSeries, i: int) -> FrozenSet[NodeId]:
    """Nodes of V_i^Total seen before t_i (includes nodes absent from G_i itself)."""
    _check_step(series, i)
    total = series.total
    seen = total.node_first_seen
    return frozenset(int(v) for v in total.node_ids[(seen < i) & (seen >= 1)])


def new_node_counts(series: GraphSeries) -> np.ndarray:
    """|V_i^new| for i = 1..n (entry 0 is step 1)."""
    seen = series.total.node_first_seen
    return np.bincount(seen, minlength=len(series) + 1)[1:]


def classify_new_edges(series: GraphSeries, i: int) -> NewEdges:
    """Split E_i^Total \\ E_{i-1}^Total by the classes of the endpoints at t_i."""
    _check_step(series, i)
    total = series.total
    rows = np.flatnonzero(total.edge_first_seen == i)
    node_seen = total.node_first_seen
    buckets: Dict[int, List[Edge]] = {0: [], 1: [], 2: []}
    for r in rows:
        u, v = (int(x) for x in total.edge_list[r])
        n_new = int(node_seen[total.node_index(u)] == i) + int(node_seen[total.node_index(v)] == i)
        buckets[n_new].append((u, v))
    counts = EdgeClassCounts(len(buckets[2]), len(buckets[1]), len(buckets[0]))
    return NewEdges(
        counts,
        frozenset(buckets[2]),
        frozenset(buckets[1]),
        frozenset(buckets[0]),
    )


def initial_degree(series: GraphSeries, v: NodeId) -> int:
    """Degree of ``v`` in the snapshot where it first appears."""
    total = series.total
    first = int(total.node_first_seen[total.node_index(v)])
    return len(series.at(first).neighbors(v))


def initial_degrees(series: GraphSeries, start: int = 2) -> Dict[NodeId, int]:
    """Initial degree of every node first seen at index >= ``start``."""
    total = series.total
    out: Dict[NodeId, int] = {}
    for v, first in zip(total.node_ids, total.node_first_seen):
        if first >= start:
            out[int(v)] = len(series.at(int(first)).adjacency[int(v)])
    return out
