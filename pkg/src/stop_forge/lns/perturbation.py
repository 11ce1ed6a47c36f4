"""Inter-route shifting perturbation."""

from __future__ import annotations

from ..instance import Solution
from .core import Ctx
from .moves import greedy_insert


def shift_perturbation(ctx: Ctx, sol: Solution) -> bool:
    """Relocate every originally visited vertex to the other route where it
    costs least, even if total time grows; refill each source route that lost
    a vertex. Works in place; returns whether any vertex moved."""
    reference = sol.copy()
    n = len(sol.routes)
    changed = False
    for r1 in range(n):
        moved = False
        for v in reference.routes[r1].vertices[1:-1]:
            src = sol.routes[r1]
            seq = src.vertices
            if v not in seq:
                continue
            pos = seq.index(v)
            if not ctx.can_remove(seq, pos):
                continue
            left = ctx.removal_duration(seq, src.duration, pos)
            if left > ctx.limit:
                continue
            best = None
            for r2 in range(n):
                if r2 == r1:
                    continue
                dst = sol.routes[r2]
                # moving a lone vertex into an idle vehicle only relabels routes
                if dst.is_empty and len(seq) == 3:
                    continue
                opt = ctx.best_insertion(dst.vertices, dst.duration, v)
                if opt is not None:
                    inc = opt[0] - dst.duration
                    if best is None or inc < best[0]:
                        best = (inc, r2, opt[1])
            if best is None:
                continue
            _, r2, at = best
            dseq = sol.routes[r2].vertices
            ctx.set_route(sol, r1, seq[:pos] + seq[pos + 1:])
            ctx.set_route(sol, r2, dseq[:at] + [v] + dseq[at:])
            moved = True
        if moved:
            changed = True
            greedy_insert(ctx, sol, scope=[r1])
    return changed
