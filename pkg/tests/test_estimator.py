import numpy as np
import pytest

from graphseries import GraphSeries, Snapshot
from graphseries.errors import DegenerateInputError, InvalidParameterError
from graphseries.estimator import (
    edge_stability_factor,
    edge_stability_theorem,
    estimate_a_e,
    estimate_a_n,
    estimate_all,
    estimate_delta_n,
    estimate_p,
    node_stability_factor,
    node_stability_theorem,
)
from graphseries.fixtures import synth_fixture
from graphseries.params import ModelParams


def growth_series(new_counts, start=20):
    """Nested chains: each step appends ``c`` nodes to a path."""
    n = start
    snaps = [Snapshot.from_edges([(i, i + 1) for i in range(n - 1)])]
    for c in new_counts:
        n += c
        snaps.append(Snapshot.from_edges([(i, i + 1) for i in range(n - 1)]))
    return GraphSeries.from_snapshots(snaps)


@pytest.fixture(scope="module")
def synthetic():
    return synth_fixture(ModelParams(30, 0.7, 0.8, 0.6), 800, 12, seed=2, alpha=1.4, m=3)


def test_delta_n_arithmetic():
    assert estimate_delta_n(growth_series([100] * 4)) == 100
    assert estimate_delta_n(growth_series([7, 90, 100, 110]), window=3) == 100
    assert estimate_delta_n(growth_series([7, 90, 100, 110]), window=4) == 77  # 76.75 rounds up
    with pytest.raises(InvalidParameterError):
        estimate_delta_n(growth_series([5, 5]), window=3)


def test_single_snapshot_errors():
    s = GraphSeries.from_snapshots([Snapshot.from_edges([(0, 1)])])
    for fn in (estimate_delta_n, estimate_a_n, estimate_a_e, estimate_p, estimate_all):
        with pytest.raises(DegenerateInputError):
            fn(s)


def test_static_series_flags_only_p():
    g = Snapshot.from_edges([(0, 1), (1, 2), (2, 3)])
    est = estimate_all(GraphSeries.from_snapshots([g, g, g]))
    assert est.delta_n == 0
    assert est.a_n.value == 1.0 and est.a_e.value == 1.0
    assert set(est.errors) == {"p"}
    with pytest.raises(DegenerateInputError):
        est.params


def test_no_churn_gives_full_memory():
    s = growth_series([10, 10, 10])
    assert estimate_a_n(s) == pytest.approx(1.0)
    assert estimate_a_e(s) == pytest.approx(1.0)


def test_estimate_p_formula():
    g1 = Snapshot.from_edges([(i, i + 1) for i in range(10)])
    close2 = GraphSeries.from_snapshots([g1, Snapshot.from_edges(list(g1.edges) + [(0, 2), (4, 6)])])
    assert estimate_p(close2) == 1.0
    mixed = GraphSeries.from_snapshots([g1, Snapshot.from_edges(list(g1.edges) + [(0, 2), (4, 8)])])
    assert estimate_p(mixed) == pytest.approx(0.5)  # mean d = 3
    with pytest.raises(DegenerateInputError):
        estimate_p(growth_series([3, 3]))


def test_moment_estimator_recovers_exact_expectation():
    # feed the estimator a series whose surviving counts equal their expectation
    a = 0.55
    sizes = [200.0]
    survivors = []
    for t in range(1, 8):
        s = sum(a * (1 - a) ** (t - i) * sizes[i - 1] for i in range(1, t + 1))
        survivors.append(int(round(s)))
        sizes.append(survivors[-1] + 40)
    # build nodes so that exactly `survivors` old nodes persist each step
    rng = np.random.default_rng(0)
    seen = list(range(200))
    current = list(range(200))
    snaps = [Snapshot.from_edges([], current)]
    next_id = 200
    for t, k in enumerate(survivors, start=1):
        keep = sorted(rng.choice(seen, size=k, replace=False).tolist())
        new = list(range(next_id, next_id + 40))
        next_id += 40
        seen += new
        current = keep + new
        snaps.append(Snapshot.from_edges([], current))
    est = node_stability_factor(GraphSeries.from_snapshots(snaps))
    # sampling survivors uniformly from all seen nodes matches the moment in count only
    assert est.value == pytest.approx(a, abs=0.02)


def test_round_trip_small(synthetic):
    est = estimate_all(synthetic)
    assert 27 <= est.delta_n <= 33
    assert est.a_n.value == pytest.approx(0.7, abs=0.1)
    assert est.a_e.value == pytest.approx(0.8, abs=0.1)
    assert est.p == pytest.approx(0.6, abs=0.05)
    assert not est.errors
    assert est.params == ModelParams(est.delta_n, est.a_n.value, est.a_e.value, est.p)


def test_robust_median_option(synthetic):
    mean = node_stability_factor(synthetic)
    med = node_stability_factor(synthetic, robust=True)
    assert med.robust and med.value == pytest.approx(float(np.median(mean.per_step)))


def test_stability_method_flags_fallbacks(synthetic):
    est = node_stability_factor(synthetic, method="stability")
    assert est.method == "stability"
    assert len(est.per_step) == len(synthetic) - 1
    assert all(0 < a <= 1 for a in est.per_step)
    assert set(est.fallback_steps) <= set(range(1, len(synthetic)))
    e = edge_stability_factor(synthetic, method="stability")
    assert 0 < e.value <= 1
    with pytest.raises(InvalidParameterError):
        node_stability_factor(synthetic, method="mle")


def test_relabeling_invariance(synthetic):
    ids = sorted(synthetic.total.nodes)
    perm = dict(zip(ids, np.random.default_rng(1).permutation(ids).tolist()))
    relabeled = GraphSeries.from_snapshots([
        Snapshot.from_edges([(perm[u], perm[v]) for u, v in g.edges], [perm[v] for v in g.nodes])
        for g in synthetic
    ])
    a, b = estimate_all(synthetic), estimate_all(relabeled)
    assert a.delta_n == b.delta_n
    assert a.a_n.value == pytest.approx(b.a_n.value, abs=1e-12)
    assert a.a_e.value == pytest.approx(b.a_e.value, abs=1e-12)
    assert a.p == pytest.approx(b.p, abs=1e-12)


@pytest.mark.parametrize("t,delta_n,v_t", [(3, 50, 100), (5, 30, 200), (10, 20, 150), (2, 100, 250), (4, 10, 500)])
def test_node_closed_form_monotone_iff_condition(t, delta_n, v_t):
    grid = np.arange(0.05, 0.96, 0.05)
    vals = [node_stability_theorem(t, a, delta_n, v_t) for a in grid]
    diffs = np.diff(vals)
    if (2 * t - 1) * delta_n > v_t:
        assert np.all(diffs > 0)
    else:
        assert np.all(diffs <= 1e-15)


def test_node_closed_form_no_growth():
    assert node_stability_theorem(4, 0.5, 0, 100) == pytest.approx(1.0)


def test_edge_closed_form_symmetric_in_a():
    nodes = [100.0, 120.0, 140.0]
    a = edge_stability_theorem(0.3, nodes, 160.0, 1.2)
    b = edge_stability_theorem(0.7, nodes, 160.0, 1.2)
    assert a == pytest.approx(b)
