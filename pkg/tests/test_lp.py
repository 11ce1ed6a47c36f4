import numpy as np
import pytest

from conftest import I, J, K, L, S, T, make_example
from oracles import optimum, random_insertion_solution
from stop_forge.generators import random_instance
from stop_forge.instance import InfeasibleInstanceError, parse_instance, preprocess, shortest_times
from stop_forge.lp import (
    BACKENDS,
    LPInfeasibleError,
    build_model,
    check_point,
    open_session,
    point_from_solution,
    round_point,
    solve_lp,
)

TWO_FAR_MANDATORY = "n 4\nm 1\ntmax 10.5\n0 0 0\n5 0 0 M\n-5 0 0 M\n0 0 0\n"


def _example_model(**kw):
    inst = make_example(**kw)
    return inst, build_model(inst, shortest_times(inst))


def test_example_variable_count():
    inst, model = _example_model()
    assert model.n_vars == 2 * len(inst.arcs) + inst.n + 1 == 25


def test_flow_start_row():
    _, model = _example_model()
    rows = [r for r in model.rows if r.tag == "flow-start"]
    si = next(r for r in rows if ("f", (S, I)) in r.coeffs)
    # f_si = (T - d_si) x_si = 3 x_si
    assert si.coeffs == {("f", (S, I)): 1.0, ("x", (S, I)): -3.0}
    assert si.lo == si.hi == 0.0


def test_only_endpoints_fixed_without_mandatory():
    _, model = _example_model()
    fixed = {v for v in model.vertices
             if model.lb[model.index(("y", v))] == model.ub[model.index(("y", v))] == 1.0}
    assert fixed == {S, T}
    _, model = _example_model(mandatory=(J,))
    assert model.lb[model.index(("y", J))] == 1.0


def test_lp_point_satisfies_every_row():
    inst, model = _example_model()
    point = solve_lp(model)
    assert check_point(model, point.values) == []
    # the best route s l j t collects 2; the relaxation can only do better
    assert point.objective >= 2.0 - 1e-9


@pytest.mark.parametrize("seed", range(12))
def test_relaxation_bounds_the_optimum(seed):
    inst = random_instance(7 + seed % 4, 1 + seed % 2, seed=600 + seed, tightness=0.7)
    try:
        pp = preprocess(inst)
    except InfeasibleInstanceError:
        pytest.skip("infeasible draw")
    opt = optimum(pp)
    model = build_model(pp, pp.r)
    point = solve_lp(model)
    assert check_point(model, point.values) == []
    if opt is not None:
        assert point.objective >= opt - 1e-6


@pytest.mark.parametrize("seed", range(10))
def test_integral_solutions_are_model_points(seed):
    inst = random_instance(12, 2, seed=700 + seed, tightness=0.8)
    pp = preprocess(inst)
    model = build_model(pp, pp.r)
    rng = np.random.default_rng(seed)
    for _ in range(20):
        sol = random_insertion_solution(pp, rng)
        if sol is None:
            continue
        values = point_from_solution(model, sol)
        assert check_point(model, values) == []
        assert model.objective @ values == pytest.approx(sol.profit_sum)


def test_round_point_halves_go_up():
    assert round_point(np.array([0.4, 0.5, 0.49999, 1.0])).tolist() == [0.0, 1.0, 0.0, 1.0]
    assert round_point({"a": 0.4, "b": 0.5}) == {"a": 0, "b": 1}


def test_infeasible_relaxation():
    inst = parse_instance(TWO_FAR_MANDATORY)
    pp = preprocess(inst)
    with pytest.raises(LPInfeasibleError):
        solve_lp(build_model(pp, pp.r))


def test_preprocess_catches_obviously_infeasible():
    text = "n 3\nm 1\ntmax 4\n0 0 0\n5 0 0 M\n0 0 0\n"
    with pytest.raises(InfeasibleInstanceError):
        preprocess(parse_instance(text))


@pytest.mark.parametrize("seed", range(4))
def test_backends_agree(seed):
    pp = preprocess(random_instance(14, 2, seed=800 + seed, tightness=0.7))
    model = build_model(pp, pp.r)
    values = [solve_lp(model, open_session(model, name)).objective for name in BACKENDS]
    assert max(values) - min(values) <= 1e-6 * max(1.0, abs(values[0]))


def test_cut_rows_are_appended_and_reused():
    _, model = _example_model()
    from stop_forge.cuts import separate_avics
    inst = make_example()
    cuts = separate_avics(inst)
    base = model.n_rows
    assert sum(model.add_cut(c) for c in cuts) == 2
    assert not model.add_cut(cuts[0])
    assert model.n_rows == base + 2 and model.n_base_rows == base
    copy = model.copy()
    assert copy.n_rows == model.n_rows and copy.has_cut(cuts[1])


def test_unknown_backend(monkeypatch):
    from stop_forge.lp import default_backend
    monkeypatch.setenv("STOP_FORGE_LP", "nope")
    with pytest.raises(ValueError):
        default_backend()
