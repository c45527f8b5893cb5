"""Synthetic series with known structure, for tests and experiments."""

from __future__ import annotations

from typing import Dict, List, Set

import numpy as np

from .baselines import BaConfig, generate_ba
from .errors import InvalidParameterError
from .generator import GeneratorConfig, generate_series
from .graph import Snapshot
from .params import ModelParams
from .series import GraphSeries


class _Grower:
    """Adjacency with an endpoint list so uniform picks are (deg+1)-weighted."""

    def __init__(self, g: Snapshot, rng: np.random.Generator):
        self.adj: Dict[int, Set[int]] = {v: set(nb) for v, nb in g.adjacency.items()}
        self.stubs: List[int] = []
        for v in sorted(self.adj):
            self.stubs.extend([v] * (len(self.adj[v]) + 1))
        self.rng = rng
        self.n_edges = g.number_of_edges()

    def pick(self) -> int:
        return self.stubs[int(self.rng.integers(len(self.stubs)))]

    def add_node(self, v: int) -> None:
        self.adj[v] = set()
        self.stubs.append(v)

    def add_edge(self, u: int, v: int) -> bool:
        if u == v or v in self.adj[u]:
            return False
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.stubs.extend((u, v))
        self.n_edges += 1
        return True

    def snapshot(self, time_index: int) -> Snapshot:
        return Snapshot({v: frozenset(nb) for v, nb in self.adj.items()}, time_index)


def _zipf_degrees(rng: np.random.Generator, size: int, gamma: float, k_max: int) -> np.ndarray:
    ks = np.arange(1, k_max + 1)
    w = ks ** (-gamma)
    return rng.choice(ks, size=size, p=w / w.sum())


def densifying_series(
    n0: int = 500,
    delta_n: int = 50,
    steps: int = 6,
    alpha: float = 1.2,
    gamma: float = 2.2,
    k_max: int = 20,
    closure: float = 0.6,
    seed: int = 0,
    m: int = 2,
) -> GraphSeries:
    """Nested growth series with |E_i| close to A |N_i|^alpha and no churn.

    Starts from a BA graph with ``m`` edges per arrival on ``n0`` nodes.  Every step adds
    ``delta_n`` nodes whose initial degree follows a truncated power law
    with exponent ``gamma``; they attach with weight deg+1.  Extra old-old
    edges then bring the edge count onto the densification curve; with
    probability ``closure`` such an edge closes a triangle, otherwise its
    far end is a (deg+1)-weighted pick.
    """
    if steps < 1:
        raise InvalidParameterError("steps must be at least 1")
    rng = np.random.default_rng(seed)
    base = generate_ba(BaConfig(n=n0, m=m, m0=m + 1, seed=int(rng.integers(2**31))))
    coeff = base.number_of_edges() / n0**alpha
    grower = _Grower(base, rng)
    snaps = [grower.snapshot(1)]
    next_id = n0
    for t in range(2, steps + 1):
        ks = _zipf_degrees(rng, delta_n, gamma, k_max)
        old = len(grower.adj)
        first_new = next_id
        for k in ks:
            v = next_id
            next_id += 1
            targets: Set[int] = set()
            k = min(int(k), old)
            while len(targets) < k:
                u = grower.pick()
                if u < first_new:
                    targets.add(u)
            grower.add_node(v)
            for u in sorted(targets):
                grower.add_edge(v, u)
        goal = int(round(coeff * len(grower.adj) ** alpha))
        tries = 0
        new_ids = set(range(first_new, next_id))
        while grower.n_edges < goal and tries < 100 * goal:
            tries += 1
            u = grower.pick()
            if u in new_ids:
                continue
            if rng.random() < closure and grower.adj[u]:
                nb = sorted(grower.adj[u])
                w = nb[int(rng.integers(len(nb)))]
                nb2 = sorted(grower.adj[w])
                x = nb2[int(rng.integers(len(nb2)))]
            else:
                x = grower.pick()
            if x in new_ids:
                continue
            grower.add_edge(u, x)
        snaps.append(grower.snapshot(t))
    return GraphSeries(tuple(snaps))


def ba_growth_series(n_final: int, delta_n: int, steps: int, m: int = 2, seed: int = 0) -> GraphSeries:
    """Prefixes of a single BA process, ``delta_n`` arrivals apart."""
    g = generate_ba(BaConfig(n=n_final, m=m, m0=m + 1, seed=seed))
    sizes = [n_final - (steps - 1 - j) * delta_n for j in range(steps)]
    if sizes[0] <= m + 1:
        raise InvalidParameterError("series too long for the final size")
    snaps = []
    for t, size in enumerate(sizes, start=1):
        adj = {v: frozenset(u for u in g.adjacency[v] if u < size) for v in range(size)}
        snaps.append(Snapshot(adj, t))
    return GraphSeries(tuple(snaps))


def synth_fixture(
    params: ModelParams,
    seed_graph_size: int,
    steps: int,
    seed: int = 0,
    alpha: float = 1.4,
    m: int = 3,
) -> GraphSeries:
    """Model-generated series with known parameters.

    The first two snapshots are a BA graph on ``seed_graph_size`` nodes and
    its densified growth by ``params.delta_n`` nodes (see
    :func:`densifying_series`); ``steps`` snapshots generated by the model
    follow.  ``alpha`` sets the densification of the seed pair and with it
    the number of old-old edges the model adds each step.
    """
    if steps < 2:
        raise InvalidParameterError("synth_fixture needs steps >= 2")
    if params.delta_n < 1:
        raise InvalidParameterError("synth_fixture needs delta_n >= 1")
    base = densifying_series(
        n0=seed_graph_size, delta_n=params.delta_n, steps=2, alpha=alpha, seed=seed, m=m
    )
    generated = generate_series(base, GeneratorConfig(params=params, seed=seed, steps=steps))
    return GraphSeries(base.snapshots + tuple(generated))
