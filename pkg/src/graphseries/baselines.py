"""Reference generators for comparison runs: BA and extended BA (EBA).

EBA follows the local-events model of Albert and Barabasi (2000): each
event adds m links between existing nodes (probability ``p_add``),
rewires m links (probability ``q_rewire``) or adds a node with m links.
Link ends are chosen with probability proportional to degree + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

import numpy as np

from .errors import InvalidParameterError
from .graph import Snapshot

_MAX_RETRIES = 100


@dataclass(frozen=True)
class BaConfig:
    n: int
    m: int
    m0: int
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.m <= self.m0 < self.n:
            raise InvalidParameterError(
                f"need 1 <= m <= m0 < n, got m={self.m}, m0={self.m0}, n={self.n}"
            )


@dataclass(frozen=True)
class EbaConfig(BaConfig):
    p_add: float = 0.0
    q_rewire: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if self.p_add < 0 or self.q_rewire < 0 or self.p_add + self.q_rewire >= 1:
            raise InvalidParameterError("need p_add, q_rewire >= 0 and p_add + q_rewire < 1")


def _clique(m0: int) -> Dict[int, Set[int]]:
    return {v: {u for u in range(m0) if u != v} for v in range(m0)}


def generate_ba(config: BaConfig) -> Snapshot:
    """Preferential attachment grown from an m0-clique; each arrival adds m edges."""
    rng = np.random.default_rng(config.seed)
    adj = _clique(config.m0)
    # one entry per edge endpoint, so a uniform pick is degree-proportional
    ends: List[int] = [v for v in range(config.m0) for _ in range(config.m0 - 1)]
    for v in range(config.m0, config.n):
        targets: Set[int] = set()
        while len(targets) < config.m:
            if ends:
                t = ends[int(rng.integers(len(ends)))]
            else:
                t = int(rng.integers(v))
            targets.add(t)
        adj[v] = set()
        for t in sorted(targets):
            adj[v].add(t)
            adj[t].add(v)
            ends.extend((v, t))
    return Snapshot({v: frozenset(nb) for v, nb in adj.items()}, time_index=1)


class _PreferentialGraph:
    """Adjacency plus an edge list; picks nodes with probability (deg+1)/sum(deg+1)."""

    def __init__(self, adj: Dict[int, Set[int]]):
        self.adj = adj
        self.nodes: List[int] = sorted(adj)
        self.edges: List[Tuple[int, int]] = sorted(
            (u, v) for u in adj for v in adj[u] if u < v
        )
        self.edge_pos = {e: i for i, e in enumerate(self.edges)}

    def pick(self, rng: np.random.Generator) -> int:
        r = int(rng.integers(len(self.nodes) + 2 * len(self.edges)))
        if r < len(self.nodes):
            return self.nodes[r]
        r -= len(self.nodes)
        return self.edges[r // 2][r % 2]

    def add_node(self, v: int) -> None:
        self.adj[v] = set()
        self.nodes.append(v)

    def add_edge(self, u: int, v: int) -> None:
        e = (u, v) if u < v else (v, u)
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.edge_pos[e] = len(self.edges)
        self.edges.append(e)

    def remove_edge(self, u: int, v: int) -> None:
        e = (u, v) if u < v else (v, u)
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        i = self.edge_pos.pop(e)
        last = self.edges.pop()
        if i < len(self.edges):
            self.edges[i] = last
            self.edge_pos[last] = i

    def attach_new(self, v: int, m: int, rng: np.random.Generator) -> None:
        targets: Set[int] = set()
        while len(targets) < m:
            targets.add(self.pick(rng))
        self.add_node(v)
        for t in sorted(targets):
            self.add_edge(v, t)


def generate_eba(config: EbaConfig) -> Snapshot:
    rng = np.random.default_rng(config.seed)
    g = _PreferentialGraph(_clique(config.m0))
    next_id = config.m0
    while next_id < config.n:
        r = rng.random()
        if r < config.p_add:
            for _ in range(config.m):
                for _ in range(_MAX_RETRIES):
                    u = g.nodes[int(rng.integers(len(g.nodes)))]
                    v = g.pick(rng)
                    if u != v and v not in g.adj[u]:
                        g.add_edge(u, v)
                        break
        elif r < config.p_add + config.q_rewire:
            for _ in range(config.m):
                for _ in range(_MAX_RETRIES):
                    u = g.nodes[int(rng.integers(len(g.nodes)))]
                    if not g.adj[u]:
                        continue
                    nb = sorted(g.adj[u])
                    old = nb[int(rng.integers(len(nb)))]
                    new = g.pick(rng)
                    if new != u and new not in g.adj[u]:
                        g.remove_edge(u, old)
                        g.add_edge(u, new)
                        break
        else:
            g.attach_new(next_id, config.m, rng)
            next_id += 1
    return Snapshot({v: frozenset(nb) for v, nb in g.adj.items()}, time_index=1)


def ba_like(n: int, n_edges: int, seed: int = 0) -> BaConfig:
    """BA config whose output roughly matches a target's node and edge counts."""
    m = max(1, round(n_edges / max(n, 1)))
    m = min(m, max(n - 2, 1))
    return BaConfig(n=n, m=m, m0=m + 1, seed=seed)
