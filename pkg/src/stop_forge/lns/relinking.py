"""Path relinking between elite solutions."""

from __future__ import annotations

from ..instance import Solution
from .core import Ctx, better
from .local_search import local_search
from .pool import Pool, pool_try_add


def visited_all(ctx: Ctx, sol: Solution) -> set[int]:
    return sol.visited | {ctx.s, ctx.t}


def similarity(ctx: Ctx, x: Solution, y: Solution) -> float:
    vx, vy = visited_all(ctx, x), visited_all(ctx, y)
    return 2.0 * len(vx & vy) / (len(vx) + len(vy))


def _restore(ctx: Ctx, sol: Solution, k: int) -> bool:
    """Drop profitable vertices, cheapest first, until route ``k`` fits."""
    route = sol.routes[k]
    if route.duration <= ctx.limit:
        return True
    order = sorted((v for v in route.vertices[1:-1] if v not in ctx.mandatory),
                   key=lambda v: (ctx.profit.get(v, 0), route.vertices.index(v)))
    for v in order:
        seq = sol.routes[k].vertices
        pos = seq.index(v)
        if not ctx.can_remove(seq, pos):
            continue  # removal would disconnect the route
        ctx.set_route(sol, k, seq[:pos] + seq[pos + 1:])
        if sol.routes[k].duration <= ctx.limit:
            return True
    return False


def path_between(ctx: Ctx, start: Solution, guide: Solution) -> Solution:
    """Walk from ``start`` towards ``guide`` by forcing in the guide's extra
    vertices, repairing, and polishing each waypoint; return the best one."""
    current = start.copy()
    best = start.copy()
    to_add = ctx.profit_order(sorted(guide.visited - start.visited - {ctx.s, ctx.t}))
    while to_add:
        snapshot = [r.copy() for r in current.routes]
        open_routes = {k for k, r in enumerate(current.routes) if r.duration <= ctx.limit}
        while to_add and open_routes:
            v = to_add.pop(0)
            if v in current.visited:
                continue
            choice = None
            for k in sorted(open_routes):
                r = current.routes[k]
                opt = ctx.best_insertion(r.vertices, r.duration, v, allow_over=True)
                if opt is not None and (choice is None or opt[0] - r.duration < choice[0]):
                    choice = (opt[0] - r.duration, k, opt[1])
            if choice is None:
                continue
            _, k, pos = choice
            seq = current.routes[k].vertices
            ctx.set_route(current, k, seq[:pos] + [v] + seq[pos:])
            if current.routes[k].duration > ctx.limit:
                open_routes.discard(k)
        for k in range(len(current.routes)):
            if not _restore(ctx, current, k):
                current.routes[k] = snapshot[k]
        local_search(ctx, current)
        if better(current, best):
            best = current.copy()
    return best


def path_relinking(ctx: Ctx, pool: Pool, y: Solution, eps2: float) -> Solution:
    """Relink ``y`` with each dissimilar pool member in both directions and
    offer the best waypoint to the pool. Returns that best solution."""
    best = y
    for x in list(pool.members):
        if similarity(ctx, x, y) < eps2:
            for a, b in ((y, x), (x, y)):
                cur = path_between(ctx, a, b)
                if better(cur, best):
                    best = cur
    pool_try_add(pool, best)
    return best
