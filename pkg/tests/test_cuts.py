import itertools

import numpy as np
import pytest

from conftest import I, J, K, L, S, T, make_example
from oracles import solution_values
from stop_forge.cuts import (
    AVIC,
    CCC,
    LCI,
    Cut,
    CutSelectionPolicy,
    bidirectional_pairs,
    build_conflicts,
    conflict_pairs,
    cutting_plane,
    select_cuts,
    separate_avics,
    separate_cccs,
    separate_lci,
)
from stop_forge.generators import random_instance
from stop_forge.instance import Instance, preprocess, shortest_times
from stop_forge.lp import build_model, point_from_solution, solve_lp, to_point


def test_conflicts_on_worked_example(example):
    r = shortest_times(example)
    pairs = conflict_pairs(r, example.time_limit, S, T, example.vertices)
    assert pairs == {frozenset((I, K)), frozenset((I, J)), frozenset((K, J)), frozenset((K, L))}


def test_unreachable_pair_conflicts():
    arcs = {(0, 1): 1.0, (1, 3): 1.0, (0, 2): 1.0, (2, 3): 1.0}
    inst = Instance("u", 4, 0, 3, frozenset(), {1: 1, 2: 1}, arcs, 2, 100.0)
    assert conflict_pairs(shortest_times(inst), 100.0, 0, 3, inst.vertices) == {frozenset((1, 2))}


@pytest.mark.parametrize("seed", range(6))
def test_conflicts_symmetric_and_relabel_invariant(seed):
    inst = random_instance(12, 2, seed=seed, tightness=0.6)
    r = shortest_times(inst)
    pairs = conflict_pairs(r, inst.time_limit, inst.origin, inst.destination, inst.vertices)
    rng = np.random.default_rng(seed)
    inner = list(inst.interior)
    perm = dict(zip(inner, (int(v) for v in rng.permutation(inner))))
    perm[inst.origin], perm[inst.destination] = inst.origin, inst.destination
    arcs = {(perm[i], perm[j]): d for (i, j), d in inst.arcs.items()}
    relabeled = Instance("p", inst.n, inst.origin, inst.destination, frozenset(),
                         {perm[v]: p for v, p in inst.profit.items()}, arcs, inst.fleet_size,
                         inst.time_limit)
    r2 = shortest_times(relabeled)
    pairs2 = conflict_pairs(r2, inst.time_limit, inst.origin, inst.destination,
                            relabeled.vertices)
    assert pairs2 == {frozenset(perm[v] for v in p) for p in pairs}


def test_avic_on_worked_example(example):
    assert bidirectional_pairs(example) == [(I, K)]
    cuts = separate_avics(example)
    assert len(cuts) == 2
    assert {c.coeffs[("y", I)] for c in cuts} == {1.0, -1.0}
    assert all(c.rhs == 1.0 and c.sense == "<=" for c in cuts)


def test_avic_counts():
    arcs = {(0, 1): 1.0, (1, 2): 1.0}
    assert separate_avics(Instance("c", 3, 0, 2, frozenset(), {1: 1}, arcs, 1, 5.0)) == []
    n = 6
    arcs = {(i, j): 1.0 for i in range(n) for j in range(n) if i != j}
    inst = Instance("k", n, 0, n - 1, frozenset(), {v: 1 for v in range(1, n - 1)}, arcs, 1, 9.0)
    pp = preprocess(inst)
    assert len(separate_avics(pp)) == 2 * 6  # C(4, 2) interior pairs


def test_lci_example():
    cut = separate_lci({1: 1.0, 2: 1.0, 3: 0.99}, {1: 4, 2: 3, 3: 4}, 6)
    assert cut is not None
    assert cut.coeffs == {("y", 1): 1.0, ("y", 2): 1.0, ("y", 3): 1.0}
    assert cut.rhs == 1.0
    assert cut.violation == pytest.approx(1.99)


def test_lci_none_without_cover():
    assert separate_lci({1: 1.0}, {1: 1}, 5) is None


def test_lci_valid_for_knapsack_points():
    rng = np.random.default_rng(4)
    for _ in range(60):
        n = int(rng.integers(2, 11))
        profits = {v: int(rng.integers(1, 10)) for v in range(1, n + 1)}
        tau = float(rng.uniform(1, sum(profits.values())))
        ybar = {v: float(rng.uniform(0, 1)) for v in profits}
        cut = separate_lci(ybar, profits, tau, precision=-1e9)
        if cut is None:
            continue
        cap = int(np.floor(tau))
        for bits in itertools.product((0, 1), repeat=n):
            y = dict(zip(profits, bits))
            if sum(profits[v] * y[v] for v in profits) <= cap:
                assert cut.activity({("y", v): y[v] for v in profits}) <= cut.rhs + 1e-9


def _cut(idx, violation=1.0):
    c = Cut(CCC, {("x", (0, k)): 1.0 for k in idx}, ">=", 1.0)
    c.violation = violation
    return c


def test_select_cuts_examples():
    a = _cut([1, 2])
    assert select_cuts([a]) == [a]
    twin = _cut([1, 2], 0.5)
    assert select_cuts([twin, a]) == [a]
    b = _cut([3], 0.5)
    assert select_cuts([b, a]) == [a, b]
    assert select_cuts([]) == []


def test_select_pairwise_flag():
    top = _cut([1], 2.0)
    b = _cut([2, 3], 1.0)
    c = _cut([2, 3], 0.9)
    assert len(select_cuts([top, b, c])) == 3
    assert len(select_cuts([top, b, c], CutSelectionPolicy(pairwise=True))) == 2


def test_cutting_plane_without_families(example):
    pp = preprocess(random_instance(12, 2, seed=1, tightness=0.7))
    model = build_model(pp, pp.r)
    res = cutting_plane(pp, model, enable=set())
    assert res.bound == pytest.approx(solve_lp(model).objective)
    assert res.model.cuts == [] and len(res.trace) == 1


def test_cutting_plane_avic_only():
    inst = make_example()
    model = build_model(inst, shortest_times(inst))
    res = cutting_plane(inst, model, enable={AVIC})
    assert len(res.model.cuts) == 2
    assert res.trace[1].added == {AVIC: 2}
    assert model.cuts == []  # the input model is left alone


def test_cutting_plane_rejects_unknown_family(example):
    model = build_model(example, shortest_times(example))
    with pytest.raises(ValueError):
        cutting_plane(example, model, enable={"GOMORY"})


@pytest.mark.parametrize("seed", range(5))
def test_integral_point_yields_no_cuts(seed):
    pp = preprocess(random_instance(12, 2, seed=900 + seed, tightness=0.8))
    model = build_model(pp, pp.r)
    conflicts = build_conflicts(pp)
    from oracles import random_insertion_solution
    sol = random_insertion_solution(pp, np.random.default_rng(seed))
    values = point_from_solution(model, sol)
    point = to_point(model, values, float(model.objective @ values))
    assert separate_cccs(point, conflicts, pp.fleet_size) == []
    vals = solution_values(pp, sol.as_lists())
    assert all(c.violation_at(vals) <= 1e-9 for c in separate_avics(pp))
    assert separate_lci(point, pp.profit, sol.profit_sum) is None
