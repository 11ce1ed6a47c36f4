"""Large Neighbourhood Search driver with an elite pool and path relinking."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..instance import Instance, Solution, validate_solution
from .core import Ctx, better
from .local_search import local_search
from .moves import destroy
from .perturbation import shift_perturbation
from .pool import Pool, pool_try_add
from .relinking import path_relinking


@dataclass
class LnsConfig:
    max_iter: int = 5000
    max_pool_size: int = 20
    stalling_limit: int = 100
    removal_percentage: float = 0.75
    similarity_limit: float = 0.9
    stop_on_stall: bool = False
    # cap on local-search / shift rounds inside one iteration
    max_shift_rounds: int = 20

    def __post_init__(self):
        if self.max_iter < 0:
            raise ValueError("max_iter must be nonnegative")
        if self.max_pool_size < 1 or self.stalling_limit < 1 or self.max_shift_rounds < 1:
            raise ValueError("pool size, stalling limit and shift rounds must be positive")
        for name in ("removal_percentage", "similarity_limit"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass
class IterRecord:
    iteration: int
    best_profit: int
    best_time: float
    pool_size: int
    pr_calls: int


@dataclass
class LnsResult:
    solution: Solution
    trace: list[IterRecord] = field(default_factory=list)
    iterations: int = 0
    pr_calls: int = 0
    wall_time: float = 0.0
    stopped_on_stall: bool = False


def lns_run(instance: Instance, initial: Solution, cfg: LnsConfig | None = None, rng=None
            ) -> LnsResult:
    """Improve a feasible solution; returns the best pool member found."""
    cfg = cfg or LnsConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    report = validate_solution(instance, initial)
    if not report.feasible:
        raise ValueError(f"initial solution is infeasible: {report}")
    start = time.perf_counter()
    ctx = Ctx(instance, rng)
    y = local_search(ctx, ctx.pad(initial))
    pool = Pool(cfg.max_pool_size)
    pool.insert(y)
    stall = 0
    pr_calls = 0
    trace: list[IterRecord] = []
    stopped = False
    it = 0
    while it < cfg.max_iter:
        it += 1
        cur = pool.members[int(rng.integers(len(pool)))].copy()
        destroy(ctx, cur, cfg.removal_percentage)
        seen = set()
        while True:
            local_search(ctx, cur)
            if better(cur, pool.best()):
                stall = -1
                pool.insert(cur)
            key = cur.key()
            if key in seen or len(seen) >= cfg.max_shift_rounds:
                break
            seen.add(key)
            if not shift_perturbation(ctx, cur):
                break
        if better(cur, pool.best()):
            stall = 0
        else:
            stall += 1
        if stall >= cfg.stalling_limit:
            if cfg.stop_on_stall:
                stopped = True
                trace.append(IterRecord(it, pool.best().profit_sum, pool.best().total_time,
                                        len(pool), pr_calls))
                break
            path_relinking(ctx, pool, cur, cfg.similarity_limit)
            pr_calls += 1
            stall = 0
        pool_try_add(pool, cur)
        top = pool.best()
        trace.append(IterRecord(it, top.profit_sum, top.total_time, len(pool), pr_calls))
    best = ctx.strip(pool.best())
    return LnsResult(best, trace, it, pr_calls, time.perf_counter() - start, stopped)
