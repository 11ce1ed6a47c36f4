import numpy as np
import pytest

from oracles import is_feasible, random_insertion_solution
from stop_forge.generators import random_instance
from stop_forge.instance import Instance, Solution, preprocess, route_time, validate_solution
from stop_forge.lns import (
    Ctx,
    LnsConfig,
    Pool,
    better,
    destroy,
    greedy_insert,
    inter_route_exchange,
    lns_run,
    local_search,
    path_relinking,
    pool_try_add,
    removal_attempts,
    shift_perturbation,
    similarity,
    three_opt,
    unvisited_replace,
)


def _inst(n, arcs, profit, fleet=1, T=10.0, mandatory=()):
    return Instance("t", n, 0, n - 1, frozenset(mandatory), profit, arcs, fleet, T)


def _ctx(inst, seed=0):
    return Ctx(inst, np.random.default_rng(seed))


def _sol(ctx, *routes):
    return ctx.pad(Solution([ctx.make_route(r) for r in routes]))


def _generated(seed, n=15, fleet=2):
    return preprocess(random_instance(n, fleet, seed=seed, tightness=0.7))


def test_removal_attempts_range():
    ctx = _ctx(_inst(3, {(0, 1): 1, (1, 2): 1}, {1: 1}))
    draws = {removal_attempts(ctx, 4, 0.75) for _ in range(200)}
    assert draws == {1, 2}
    assert removal_attempts(ctx, 1, 0.75) == 0


def test_destroy_keeps_mandatory():
    inst = _generated(1)
    inst = Instance(inst.name, inst.n, inst.origin, inst.destination,
                    frozenset(list(inst.profit)[:2]),
                    {v: p for v, p in list(inst.profit.items())[2:]}, inst.arcs,
                    inst.fleet_size, inst.time_limit)
    ctx = _ctx(inst, 5)
    sol = random_insertion_solution(inst, np.random.default_rng(0))
    assert sol is not None
    for _ in range(30):
        cur = ctx.pad(sol)
        destroy(ctx, cur, 0.75)
        assert inst.mandatory <= cur.visited
        assert validate_solution(inst, ctx.strip(cur)).feasible


def test_greedy_insert_cheapest_position():
    # s=0 a=1 v=2 t=3
    arcs = {(0, 2): 1.5, (2, 1): 1.5, (1, 2): 1.0, (2, 3): 1.5, (0, 1): 1.0, (1, 3): 1.0}
    inst = _inst(4, arcs, {1: 1, 2: 1})
    ctx = _ctx(inst)
    sol = _sol(ctx, [0, 1, 3])
    assert greedy_insert(ctx, sol)
    assert sol.routes[0].vertices == [0, 1, 2, 3]
    assert sol.routes[0].duration == pytest.approx(3.5)


def test_one_zero_saves_time():
    # s=0 v=1 a=2 b=3 t=4; moving v from route 0 to route 1 saves exactly 1
    arcs = {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 1.0, (2, 4): 1.0, (0, 3): 1.0,
            (3, 4): 1.0, (3, 1): 0.5, (1, 4): 0.5}
    inst = _inst(5, arcs, {1: 1, 2: 1, 3: 1}, fleet=2)
    ctx = _ctx(inst)
    sol = _sol(ctx, [0, 1, 2, 4], [0, 3, 4])
    before = sol.total_time
    assert inter_route_exchange(ctx, sol, "1-0")
    assert sol.total_time == pytest.approx(before - 1.0)
    assert sol.key() == ((0, 2, 4), (0, 3, 1, 4))


def test_exchange_needs_two_routes():
    inst = _generated(2, fleet=1)
    ctx = _ctx(inst)
    sol = ctx.pad(random_insertion_solution(inst, np.random.default_rng(1)))
    for kind in ("1-1", "1-0", "2-1"):
        assert not inter_route_exchange(ctx, sol, kind)


def test_three_opt_short_routes_unchanged():
    d = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert three_opt([0, 2], d) == [0, 2]
    assert three_opt([0, 1, 2], d) == [0, 1, 2]


def test_three_opt_skips_missing_arcs():
    inf = float("inf")
    # reversing 1 2 would be shorter, but arc 2 -> 1 is missing
    d = [[0, 5, 1, inf], [inf, 0, inf, 1], [inf, inf, 0, 5], [inf] * 4]
    d[1][2] = 1.0
    assert three_opt([0, 1, 2, 3], d) == [0, 1, 2, 3]


def test_three_opt_fixes_a_crossing():
    pts = [(0, 0), (2, 1), (1, 1), (3, 0)]
    d = [[float(np.hypot(a[0] - b[0], a[1] - b[1])) for b in pts] for a in pts]
    assert three_opt([0, 1, 2, 3], d) == [0, 2, 1, 3]


def test_unvisited_replace_one_one():
    # s=0 a=1 b=2 t=3: swap a (profit 3) for b (profit 5)
    arcs = {(0, 1): 1.0, (1, 3): 1.0, (0, 2): 1.0, (2, 3): 1.0}
    inst = _inst(4, arcs, {1: 3, 2: 5}, T=2.0)
    ctx = _ctx(inst)
    sol = _sol(ctx, [0, 1, 3])
    assert unvisited_replace(ctx, sol, "1-1")
    assert sol.routes[0].vertices == [0, 2, 3]
    assert not unvisited_replace(ctx, sol, "1-1")


def test_unvisited_replace_two_one():
    # adjacent a, b (3 + 1) out, c (5) in
    arcs = {(0, 1): 1.0, (1, 2): 1.0, (2, 4): 1.0, (0, 3): 1.0, (3, 4): 2.0}
    inst = _inst(5, arcs, {1: 3, 2: 1, 3: 5}, T=3.0)
    ctx = _ctx(inst)
    sol = _sol(ctx, [0, 1, 2, 4])
    assert unvisited_replace(ctx, sol, "2-1")
    assert sol.routes[0].vertices == [0, 3, 4]
    with pytest.raises(ValueError):
        unvisited_replace(ctx, sol, "3-1")


def test_shift_needs_another_route():
    inst = _generated(3, fleet=1)
    ctx = _ctx(inst)
    sol = ctx.pad(random_insertion_solution(inst, np.random.default_rng(0)))
    assert not shift_perturbation(ctx, sol)


@pytest.mark.parametrize("seed", range(8))
def test_shift_keeps_feasibility(seed):
    inst = _generated(30 + seed, n=18, fleet=3)
    ctx = _ctx(inst, seed)
    sol = ctx.pad(random_insertion_solution(inst, np.random.default_rng(seed)))
    shift_perturbation(ctx, sol)
    assert is_feasible(inst, ctx.strip(sol).as_lists())


def test_pool_rules():
    inst = _generated(4)
    ctx = _ctx(inst)
    a = ctx.pad(random_insertion_solution(inst, np.random.default_rng(1)))
    pool = Pool(2)
    assert pool_try_add(pool, a)
    assert not pool_try_add(pool, a)  # already present
    richer = a.copy()
    greedy_insert(ctx, richer)
    local_search(ctx, richer)
    if not better(richer, a):
        pytest.skip("no improvement available on this draw")
    assert pool_try_add(pool, richer) and len(pool) == 2
    worse = Solution([ctx.empty() for _ in range(inst.fleet_size)])
    assert not pool_try_add(pool, worse)
    best = richer.copy()
    assert not pool_try_add(pool, best)  # same key
    assert pool.best().key() == richer.key()
    with pytest.raises(ValueError):
        Pool(0)


def test_pool_full_evicts_worst():
    inst = _inst(5, {(0, v): 1.0 for v in (1, 2, 3)} | {(v, 4): 1.0 for v in (1, 2, 3)},
                 {1: 1, 2: 2, 3: 3}, fleet=1)
    ctx = _ctx(inst)
    s1, s2, s3 = (_sol(ctx, [0, v, 4]) for v in (1, 2, 3))
    pool = Pool(2)
    pool.insert(s1)
    pool.insert(s2)
    assert pool_try_add(pool, s3)
    assert sorted(s.profit_sum for s in pool) == [2, 3]
    assert not pool_try_add(pool, s1)


def test_similarity():
    inst = _inst(5, {(0, v): 1.0 for v in (1, 2, 3)} | {(v, 4): 1.0 for v in (1, 2, 3)},
                 {1: 1, 2: 2, 3: 3})
    ctx = _ctx(inst)
    a, b = _sol(ctx, [0, 1, 4]), _sol(ctx, [0, 2, 4])
    assert similarity(ctx, a, a) == 1.0
    assert similarity(ctx, a, b) == pytest.approx(2 * 2 / 6)


@pytest.mark.parametrize("seed", range(6))
def test_local_search_monotone_and_idempotent(seed):
    inst = _generated(50 + seed, n=16, fleet=2)
    ctx = _ctx(inst, seed)
    start = ctx.pad(random_insertion_solution(inst, np.random.default_rng(seed)))
    sol = local_search(ctx, start.copy())
    assert not better(start, sol)
    assert is_feasible(inst, ctx.strip(sol).as_lists())
    again = local_search(ctx, sol.copy())
    assert again.key() == sol.key()
    for r in sol.routes:
        assert r.duration == pytest.approx(route_time(inst, r.vertices) if len(r.vertices) > 2 else 0)


@pytest.mark.parametrize("seed", range(3))
def test_path_relinking_keeps_feasible(seed):
    inst = _generated(70 + seed, n=18, fleet=2)
    ctx = _ctx(inst, seed)
    rng = np.random.default_rng(seed)
    pool = Pool(5)
    for _ in range(8):
        s = random_insertion_solution(inst, rng)
        if s is not None:
            pool_try_add(pool, local_search(ctx, ctx.pad(s)))
    y = pool.members[0].copy()
    out = path_relinking(ctx, pool, y, 0.9)
    assert is_feasible(inst, ctx.strip(out).as_lists())
    assert all(is_feasible(inst, ctx.strip(s).as_lists()) for s in pool)


def test_lns_zero_iterations_is_local_search():
    inst = _generated(5)
    init = random_insertion_solution(inst, np.random.default_rng(0))
    res = lns_run(inst, init, LnsConfig(max_iter=0), np.random.default_rng(1))
    ctx = _ctx(inst, 1)
    expect = ctx.strip(local_search(ctx, ctx.pad(init)))
    assert res.iterations == 0
    assert res.solution.key() == expect.key()


def test_lns_rejects_infeasible_start():
    inst = _generated(6)
    bad = Solution.from_routes(inst, [[inst.origin, inst.destination]] * (inst.fleet_size + 1)
                               + [[inst.origin, v, inst.destination] for v in list(inst.profit)[:3]]
                               )
    with pytest.raises(ValueError):
        lns_run(inst, bad, LnsConfig(max_iter=1))


def test_lns_stop_on_stall():
    inst = _generated(7, n=10)
    init = random_insertion_solution(inst, np.random.default_rng(0))
    res = lns_run(inst, init, LnsConfig(max_iter=10_000, stalling_limit=5, stop_on_stall=True))
    assert res.stopped_on_stall and res.iterations < 10_000
    assert res.pr_calls == 0


@pytest.mark.parametrize("kw", [{"max_iter": -1}, {"max_pool_size": 0},
                                {"removal_percentage": 1.5}, {"similarity_limit": -0.1}])
def test_lns_config_validation(kw):
    with pytest.raises(ValueError):
        LnsConfig(**kw)
