import itertools

import numpy as np
import pytest

from oracles import brute_maximal_cliques, flow_conservation_ok, knapsack_brute
from stop_forge.kernels import (
    CapacitatedDigraph,
    UndirectedGraph,
    knapsack_max,
    max_flow,
    maximal_cliques,
)


def test_single_arc_flow():
    g = CapacitatedDigraph(["s", "t"], {("s", "t"): 2.5})
    res = max_flow(g, "s", "t")
    assert res.flow_value == pytest.approx(2.5)
    assert set(res.source_side) == {"s"}


def test_support_network():
    big = 1.0  # the fleet size of the example
    cap = {("s", "i"): 0.5, ("s", "l"): 0.5, ("i", "k"): 0.5, ("k", "j"): 0.5,
           ("l", "j"): 0.5, ("j", "t"): 1.0,
           ("i", "b"): big, ("k", "b"): big, ("j", "b"): big}
    g = CapacitatedDigraph(["s", "i", "k", "j", "l", "t", "b"], cap)
    res = max_flow(g, "s", "b")
    assert res.flow_value == pytest.approx(1.0, abs=1e-9)
    assert set(res.source_side) == {"s"}


def test_disconnected_sink():
    g = CapacitatedDigraph(["s", "a", "t"], {("s", "a"): 1.0})
    res = max_flow(g, "s", "t")
    assert res.flow_value == 0.0
    assert set(res.source_side) == {"s", "a"}


def test_max_flow_duality_and_conservation():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(2, 8))
        cap = {(i, j): float(rng.uniform(0, 3)) for i in range(n) for j in range(n)
               if i != j and rng.random() < 0.45}
        g = CapacitatedDigraph(list(range(n)), cap)
        res = max_flow(g, 0, n - 1)
        side = set(res.source_side)
        assert 0 in side and n - 1 not in side
        cut = sum(c for (i, j), c in cap.items() if i in side and j not in side)
        assert res.flow_value == pytest.approx(cut, abs=1e-9)
        assert flow_conservation_ok(res.flow, 0, n - 1)
        assert all(-1e-12 <= f <= cap[a] + 1e-12 for a, f in res.flow.items())


def test_reversed_graph():
    g = CapacitatedDigraph([0, 1], {(0, 1): 2.0})
    assert g.reversed().capacity == {(1, 0): 2.0}


def test_negative_capacity_rejected():
    with pytest.raises(ValueError):
        CapacitatedDigraph([0, 1], {(0, 1): -1.0})


def test_conflict_graph_cliques():
    i, k, j, l = "ikjl"
    g = UndirectedGraph([i, k, j, l], [(i, k), (i, j), (k, j), (k, l)])
    assert maximal_cliques(g).as_set() == {frozenset("ikj"), frozenset("kl")}


def test_isolated_vertices_and_triangle():
    assert maximal_cliques(UndirectedGraph(["a", "b"], [])).as_set() == {
        frozenset("a"), frozenset("b")}
    tri = maximal_cliques(UndirectedGraph([1, 2, 3], [(1, 2), (2, 3), (1, 3)]))
    assert tri.cliques == [frozenset({1, 2, 3})]


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        UndirectedGraph([1], [(1, 1)])


def test_cliques_match_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(120):
        n = int(rng.integers(1, 13))
        edges = [(a, b) for a, b in itertools.combinations(range(n), 2)
                 if rng.random() < rng.uniform(0.2, 0.8)]
        res = maximal_cliques(UndirectedGraph(list(range(n)), edges))
        assert len(res.cliques) == len(res.as_set())
        assert res.as_set() == brute_maximal_cliques(range(n), edges)


def test_clique_cap_truncates():
    # complement of a perfect matching on 12 vertices has 2^6 maximal cliques
    n = 12
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if b != a + 1 or a % 2]
    res = maximal_cliques(UndirectedGraph(list(range(n)), edges), cap=10)
    assert res.truncated and len(res) == 10
    full = maximal_cliques(UndirectedGraph(list(range(n)), edges))
    assert not full.truncated and len(full) == 64


@pytest.mark.parametrize("values, weights, capacity, expected", [
    ((4, 3, 4), (4, 3, 4), 2, 0),
    ((4, 3), (4, 3), 6, 4),
    ((), (), 5, 0),
    ((5, 1), (1, 1), 0, 0),
])
def test_knapsack_examples(values, weights, capacity, expected):
    best, chosen = knapsack_max(values, weights, capacity)
    assert best == expected
    assert sum(weights[q] for q in chosen) <= capacity
    assert sum(values[q] for q in chosen) == best


def test_knapsack_matches_brute_force():
    rng = np.random.default_rng(2)
    for trial in range(150):
        n = int(rng.integers(0, 16 if trial < 10 else 11))
        values = [int(v) for v in rng.integers(0, 20, size=n)]
        weights = [int(w) for w in rng.integers(0, 15, size=n)]
        cap = int(rng.integers(0, 40))
        best, chosen = knapsack_max(values, weights, cap)
        assert best == knapsack_brute(values, weights, cap)
        assert sum(weights[q] for q in chosen) <= cap
        assert sum(values[q] for q in chosen) == best
