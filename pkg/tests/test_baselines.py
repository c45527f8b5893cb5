import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphseries.baselines import BaConfig, EbaConfig, ba_like, generate_ba, generate_eba
from graphseries.errors import InvalidParameterError
from graphseries.validation import degree_exponent


def is_simple(g):
    return all(u != v for u, v in g.edges) and sum(len(nb) for nb in g.adjacency.values()) == 2 * len(g.edges)


def test_ba_m1_is_tree():
    g = generate_ba(BaConfig(n=200, m=1, m0=1, seed=0))
    assert g.number_of_nodes() == 200
    assert g.number_of_edges() == 199


@given(st.integers(1, 5), st.integers(0, 4), st.integers(1, 80), st.integers(0, 1000))
def test_ba_edge_count_formula(m, extra, more, seed):
    m0 = m + extra
    n = m0 + more
    g = generate_ba(BaConfig(n=n, m=m, m0=m0, seed=seed))
    assert g.number_of_edges() == m0 * (m0 - 1) // 2 + m * (n - m0)
    assert is_simple(g)


def test_ba_degree_exponent():
    g = generate_ba(BaConfig(n=10_000, m=2, m0=3, seed=1))
    assert degree_exponent(g, k_min=2) == pytest.approx(-3.0, abs=0.5)


@pytest.mark.parametrize("bad", [dict(n=5, m=0, m0=2), dict(n=5, m=3, m0=2), dict(n=3, m=1, m0=3)])
def test_ba_config_validation(bad):
    with pytest.raises(InvalidParameterError):
        BaConfig(**bad)


def test_eba_config_validation():
    with pytest.raises(InvalidParameterError):
        EbaConfig(n=50, m=2, m0=3, p_add=0.6, q_rewire=0.4)
    with pytest.raises(InvalidParameterError):
        EbaConfig(n=50, m=2, m0=3, p_add=-0.1)


def test_eba_without_events_matches_ba_counts():
    ba = generate_ba(BaConfig(n=500, m=2, m0=3, seed=4))
    eba = generate_eba(EbaConfig(n=500, m=2, m0=3, seed=4))
    assert eba.number_of_nodes() == ba.number_of_nodes()
    assert eba.number_of_edges() == ba.number_of_edges()
    assert degree_exponent(eba, 2) == pytest.approx(degree_exponent(ba, 2), abs=0.6)


def test_eba_node_count_and_simplicity():
    g = generate_eba(EbaConfig(n=400, m=2, m0=4, seed=2, p_add=0.3, q_rewire=0.3))
    assert g.number_of_nodes() == 400
    assert is_simple(g)


def test_eba_adding_links_raises_mean_degree():
    n, m = 300, 2
    ba = np.mean([2 * generate_ba(BaConfig(n, m, 3, seed=s)).number_of_edges() / n for s in range(50)])
    eba = np.mean([
        2 * generate_eba(EbaConfig(n, m, 3, seed=s, p_add=0.3)).number_of_edges() / n for s in range(50)
    ])
    assert eba > ba


def test_baselines_deterministic():
    cfg = EbaConfig(n=300, m=2, m0=3, seed=8, p_add=0.2, q_rewire=0.2)
    assert generate_eba(cfg) == generate_eba(cfg)
    assert generate_ba(BaConfig(300, 2, 3, 8)) == generate_ba(BaConfig(300, 2, 3, 8))


def test_ba_like_matches_counts():
    cfg = ba_like(1000, 3100, seed=0)
    assert cfg.m == 3
    g = generate_ba(cfg)
    assert abs(g.number_of_edges() - 3100) / 3100 < 0.05
