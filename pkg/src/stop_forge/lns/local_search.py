"""The local-search stack: exchanges, 3-opt, insertions and replacements."""

from __future__ import annotations

from ..instance import Solution
from .core import IMPROVE_TOL, Ctx
from .moves import greedy_insert, inter_route_exchange, unvisited_replace
from .three_opt import three_opt


def inter_intra(ctx: Ctx, sol: Solution) -> bool:
    improved = False
    n = len(sol.routes)
    while True:
        while True:
            moved = False
            for a in range(n):
                for b in range(a + 1, n):
                    for kind in ("1-1", "1-0", "2-1"):
                        if inter_route_exchange(ctx, sol, kind, a, b):
                            moved = True
            if not moved:
                break
            improved = True
        intra = False
        for k, route in enumerate(sol.routes):
            if len(route.vertices) < 4:
                continue
            seq = three_opt(route.vertices, ctx.d)
            if seq != route.vertices:
                new = ctx.make_route(seq)
                if new.duration < route.duration - IMPROVE_TOL:
                    sol.routes[k] = new
                    intra = True
        if not intra:
            return improved
        improved = True


def replacements(ctx: Ctx, sol: Solution) -> bool:
    improved = False
    while True:
        step = unvisited_replace(ctx, sol, "1-1")
        step = unvisited_replace(ctx, sol, "2-1") or step
        if not step:
            return improved
        improved = True


def local_search(ctx: Ctx, sol: Solution) -> Solution:
    """Repeat the improvement sequence until a full pass changes nothing.

    Works in place and returns ``sol``; every accepted step raises profit or
    lowers total time at equal profit.
    """
    while True:
        changed = inter_intra(ctx, sol)
        changed = greedy_insert(ctx, sol) or changed
        changed = replacements(ctx, sol) or changed
        changed = greedy_insert(ctx, sol) or changed
        if not changed:
            return sol
