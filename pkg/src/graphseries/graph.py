"""Undirected simple graph snapshots and traversal primitives."""

from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

import numpy as np
from scipy import sparse

from .errors import InvalidParameterError, UnknownNodeError

NodeId = int
Edge = Tuple[int, int]

# Explicit marker for "no path"; None cannot silently enter arithmetic.
UNREACHABLE = None


def make_edge(u: NodeId, v: NodeId) -> Edge:
    """Canonical (min, max) form of an undirected edge."""
    if u == v:
        raise InvalidParameterError(f"self-loop on node {u}")
    return (u, v) if u < v else (v, u)


class Snapshot:
    """Immutable undirected simple graph observed at one time index.

    Build with :meth:`from_edges`; the adjacency is frozen afterwards so a
    snapshot can be shared freely between readers.
    """

    __slots__ = ("time_index", "_adj", "_edges", "_n_edges")

    def __init__(self, adjacency: Mapping[NodeId, FrozenSet[NodeId]], time_index: int = 1):
        self.time_index = int(time_index)
        self._adj: Dict[NodeId, FrozenSet[NodeId]] = dict(adjacency)
        self._edges: Optional[FrozenSet[Edge]] = None
        self._n_edges = sum(len(nb) for nb in self._adj.values()) // 2

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Tuple[NodeId, NodeId]],
        nodes: Iterable[NodeId] = (),
        time_index: int = 1,
    ) -> "Snapshot":
        """Build a snapshot; duplicate and reversed edges collapse, self-loops raise."""
        adj: Dict[NodeId, set] = {int(v): set() for v in nodes}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidParameterError(f"self-loop on node {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls({v: frozenset(nb) for v, nb in adj.items()}, time_index)

    def with_time_index(self, time_index: int) -> "Snapshot":
        g = Snapshot.__new__(Snapshot)
        g.time_index = int(time_index)
        g._adj = self._adj
        g._edges = self._edges
        g._n_edges = self._n_edges
        return g

    @property
    def nodes(self):
        return self._adj.keys()

    @property
    def edges(self) -> FrozenSet[Edge]:
        if self._edges is None:
            self._edges = frozenset(
                (u, v) for u, nb in self._adj.items() for v in nb if u < v
            )
        return self._edges

    @property
    def adjacency(self) -> Mapping[NodeId, FrozenSet[NodeId]]:
        return self._adj

    def number_of_nodes(self) -> int:
        return len(self._adj)

    def number_of_edges(self) -> int:
        return self._n_edges

    def neighbors(self, v: NodeId) -> FrozenSet[NodeId]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownNodeError(f"node {v} not in snapshot") from None

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return v in self._adj.get(u, ())

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Snapshot):
            return NotImplemented
        return (
            self.time_index == other.time_index
            and self._adj.keys() == other._adj.keys()
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.time_index, frozenset(self._adj), self.edges))

    def __repr__(self) -> str:
        return (
            f"Snapshot(time_index={self.time_index}, nodes={len(self._adj)}, "
            f"edges={self._n_edges})"
        )

    def to_csr(self) -> Tuple[sparse.csr_matrix, np.ndarray]:
        """Adjacency as a CSR matrix plus the sorted node-id array indexing it."""
        ids = np.array(sorted(self._adj), dtype=np.int64)
        index = {int(v): i for i, v in enumerate(ids)}
        rows, cols = [], []
        for u, nb in self._adj.items():
            iu = index[u]
            for v in nb:
                rows.append(iu)
                cols.append(index[v])
        n = len(ids)
        data = np.ones(len(rows), dtype=np.int8)
        mat = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        return mat, ids


def degree(g: Snapshot, v: NodeId) -> int:
    return len(g.neighbors(v))


def bfs_distances(g: Snapshot, src: NodeId) -> Dict[NodeId, Optional[int]]:
    """Hop distance from ``src`` to every node; unreachable nodes map to ``UNREACHABLE``."""
    if src not in g:
        raise UnknownNodeError(f"source {src} not in snapshot")
    adj = g.adjacency
    dist: Dict[NodeId, Optional[int]] = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if w not in dist:
                dist[w] = du
                queue.append(w)
    for v in adj:
        if v not in dist:
            dist[v] = UNREACHABLE
    return dist
