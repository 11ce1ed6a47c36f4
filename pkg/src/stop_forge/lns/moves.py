"""Destroy, greedy insertion, inter-route exchanges and unvisited replacements."""

from __future__ import annotations

import math

from ..instance import Solution
from .core import IMPROVE_TOL, Ctx


def removal_attempts(ctx: Ctx, n_profitable: int, pct: float) -> int:
    """Uniform integer strictly between 0 and ``pct * n_profitable``."""
    bound = pct * n_profitable
    if bound <= 1:
        return 0
    top = max(1, math.ceil(bound) - 1)
    return int(ctx.rng.integers(1, top + 1))


def destroy(ctx: Ctx, sol: Solution, pct: float) -> int:
    """Try to drop random visited vertices; returns the number of attempts."""
    visited_profitable = sum(1 for r in sol.routes for v in r.vertices[1:-1]
                             if v not in ctx.mandatory)
    attempts = removal_attempts(ctx, visited_profitable, pct)
    for _ in range(attempts):
        slots = [(k, pos) for k, r in enumerate(sol.routes) for pos in range(1, len(r.vertices) - 1)]
        if not slots:
            break
        k, pos = slots[int(ctx.rng.integers(len(slots)))]
        route = sol.routes[k]
        seq = route.vertices
        if seq[pos] in ctx.mandatory or not ctx.can_remove(seq, pos):
            continue
        if ctx.removal_duration(seq, route.duration, pos) > ctx.limit:
            continue
        ctx.set_route(sol, k, seq[:pos] + seq[pos + 1:])
    return attempts


def greedy_insert(ctx: Ctx, sol: Solution, scope=None) -> bool:
    """Insert unvisited vertices, in random profit order, where they cost least."""
    scope = range(len(sol.routes)) if scope is None else list(scope)
    changed = False
    for v in ctx.profit_order(ctx.unvisited(sol)):
        best = None
        for k in scope:
            r = sol.routes[k]
            opt = ctx.best_insertion(r.vertices, r.duration, v)
            if opt is not None:
                inc = opt[0] - r.duration
                if best is None or inc < best[0]:
                    best = (inc, k, opt[1])
        if best is not None:
            _, k, pos = best
            seq = sol.routes[k].vertices
            ctx.set_route(sol, k, seq[:pos] + [v] + seq[pos:])
            changed = True
    return changed


# ------------------------------------------------------------- exchanges


def _one_one(ctx: Ctx, sol: Solution, a: int, b: int) -> bool:
    ra, rb = sol.routes[a], sol.routes[b]
    sa, sb = ra.vertices, rb.vertices
    before = ra.duration + rb.duration
    for p in range(1, len(sa) - 1):
        if not ctx.can_remove(sa, p):
            continue
        ta = sa[:p] + sa[p + 1:]
        da = ctx.removal_duration(sa, ra.duration, p)
        for q in range(1, len(sb) - 1):
            if not ctx.can_remove(sb, q):
                continue
            tb = sb[:q] + sb[q + 1:]
            db = ctx.removal_duration(sb, rb.duration, q)
            ia = ctx.best_insertion(ta, da, sb[q])
            if ia is None:
                continue
            ib = ctx.best_insertion(tb, db, sa[p])
            if ib is None or ia[0] + ib[0] >= before - IMPROVE_TOL:
                continue
            ctx.set_route(sol, a, ta[:ia[1]] + [sb[q]] + ta[ia[1]:])
            ctx.set_route(sol, b, tb[:ib[1]] + [sa[p]] + tb[ib[1]:])
            return True
    return False


def _one_zero(ctx: Ctx, sol: Solution, a: int, b: int) -> bool:
    ra, rb = sol.routes[a], sol.routes[b]
    sa, sb = ra.vertices, rb.vertices
    before = ra.duration + rb.duration
    for p in range(1, len(sa) - 1):
        if not ctx.can_remove(sa, p):
            continue
        da = ctx.removal_duration(sa, ra.duration, p)
        ib = ctx.best_insertion(sb, rb.duration, sa[p])
        if ib is None or da + ib[0] >= before - IMPROVE_TOL:
            continue
        ctx.set_route(sol, a, sa[:p] + sa[p + 1:])
        ctx.set_route(sol, b, sb[:ib[1]] + [sa[p]] + sb[ib[1]:])
        return True
    return False


def _two_one(ctx: Ctx, sol: Solution, a: int, b: int) -> bool:
    ra, rb = sol.routes[a], sol.routes[b]
    sa, sb = ra.vertices, rb.vertices
    before = ra.duration + rb.duration
    for p in range(1, len(sa) - 2):
        if not ctx.can_remove(sa, p, 2):
            continue
        block = sa[p:p + 2]
        ta = sa[:p] + sa[p + 2:]
        da = ctx.removal_duration(sa, ra.duration, p, 2)
        for q in range(1, len(sb) - 1):
            if not ctx.can_remove(sb, q):
                continue
            tb = sb[:q] + sb[q + 1:]
            db = ctx.removal_duration(sb, rb.duration, q)
            ia = ctx.best_insertion(ta, da, sb[q])
            if ia is None:
                continue
            ib = ctx.best_block_insertion(tb, db, block)
            if ib is None or ia[0] + ib[0] >= before - IMPROVE_TOL:
                continue
            ctx.set_route(sol, a, ta[:ia[1]] + [sb[q]] + ta[ia[1]:])
            ctx.set_route(sol, b, tb[:ib[1]] + block + tb[ib[1]:])
            return True
    return False


_EXCHANGES = {"1-1": _one_one, "1-0": _one_zero, "2-1": _two_one}


def inter_route_exchange(ctx: Ctx, sol: Solution, kind: str, a: int | None = None,
                         b: int | None = None) -> bool:
    """Apply the first exchange of ``kind`` that strictly shortens total time.

    With a route pair given only that pair is scanned (both directions for
    the asymmetric moves); otherwise pairs are scanned in index order.
    """
    op = _EXCHANGES[kind]
    n = len(sol.routes)
    pairs = [(a, b)] if a is not None else [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        if op(ctx, sol, i, j):
            return True
        if kind != "1-1" and op(ctx, sol, j, i):
            return True
    return False


# ------------------------------------------------------- replacements


def _lex_gain(old_profit: int, old_dur: float, new_profit: int, new_dur: float) -> bool:
    if new_profit != old_profit:
        return new_profit > old_profit
    return new_dur < old_dur - IMPROVE_TOL


def unvisited_replace(ctx: Ctx, sol: Solution, kind: str) -> bool:
    """Swap one visited vertex (or two adjacent ones) for an unvisited vertex
    placed at its cheapest spot in the same route; first acceptable move wins."""
    width = 1 if kind == "1-1" else 2
    if kind not in ("1-1", "2-1"):
        raise ValueError(kind)
    order = ctx.profit_order(ctx.unvisited(sol, ctx.optional))
    if not order:
        return False
    p = ctx.profit
    for k, route in enumerate(sol.routes):
        seq = route.vertices
        for pos in range(1, len(seq) - width):
            block = seq[pos:pos + width]
            if any(v in ctx.mandatory for v in block) or not ctx.can_remove(seq, pos, width):
                continue
            rest = seq[:pos] + seq[pos + width:]
            base = ctx.removal_duration(seq, route.duration, pos, width)
            lost = sum(p.get(v, 0) for v in block)
            for v in order:
                opt = ctx.best_insertion(rest, base, v)
                if opt is None:
                    continue
                if _lex_gain(route.profit, route.duration, route.profit - lost + p[v], opt[0]):
                    ctx.set_route(sol, k, rest[:opt[1]] + [v] + rest[opt[1]:])
                    return True
    return False
