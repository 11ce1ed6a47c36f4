"""Shared state and route arithmetic for the neighbourhood operators.

Working solutions always hold ``m`` routes; ``[s, t]`` is an idle vehicle
with duration 0. Route durations are recomputed from the arc table after
every change, so no rounding drift accumulates.
"""

from __future__ import annotations

import math

from ..instance import TIME_TOL, Instance, Route, Solution

IMPROVE_TOL = 1e-9
INF = math.inf


def better(a: Solution, b: Solution) -> bool:
    """Strictly more profit, or equal profit and strictly less total time."""
    pa, pb = a.profit_sum, b.profit_sum
    if pa != pb:
        return pa > pb
    return a.total_time < b.total_time - IMPROVE_TOL


class Ctx:
    def __init__(self, instance: Instance, rng):
        self.instance = instance
        self.rng = rng
        self.d = instance.dmat
        self.s, self.t = instance.origin, instance.destination
        self.m = instance.fleet_size
        self.limit = instance.time_limit + TIME_TOL
        self.profit = instance.profit
        self.mandatory = instance.mandatory
        present = set(instance.vertices)
        self.optional = sorted(v for v in instance.profit if v in present)
        # vertices worth inserting: a zero-profit insertion is never an improvement
        self.candidates = [v for v in self.optional if instance.profit[v] > 0]

    # --------------------------------------------------------- arithmetic
    def duration(self, seq) -> float:
        if len(seq) <= 2:
            return 0.0
        d = self.d
        total = 0.0
        for a, b in zip(seq, seq[1:]):
            total += d[a][b]
        return total

    def make_route(self, seq) -> Route:
        seq = list(seq)
        p = self.profit
        return Route(seq, self.duration(seq), sum(p.get(v, 0) for v in seq))

    def set_route(self, sol: Solution, k: int, seq) -> None:
        sol.routes[k] = self.make_route(seq)

    def empty(self) -> Route:
        return Route([self.s, self.t], 0.0, 0)

    def pad(self, sol: Solution) -> Solution:
        routes = [self.make_route(r.vertices) for r in sol.routes if not r.is_empty]
        if len(routes) > self.m:
            raise ValueError("more routes than vehicles")
        routes += [self.empty() for _ in range(self.m - len(routes))]
        return Solution(routes)

    def strip(self, sol: Solution) -> Solution:
        return Solution([r.copy() for r in sol.routes if not r.is_empty])

    def unvisited(self, sol: Solution, pool=None) -> list[int]:
        seen = sol.visited
        src = self.candidates if pool is None else pool
        return [v for v in src if v not in seen]

    def profit_order(self, vertices) -> list[int]:
        """Random choice between nondecreasing and nonincreasing profit."""
        descending = bool(self.rng.integers(2))
        p = self.profit
        if descending:
            return sorted(vertices, key=lambda v: (-p[v], v))
        return sorted(vertices, key=lambda v: (p[v], v))

    # ------------------------------------------------------- insertion
    def best_insertion(self, seq, duration: float, v: int, allow_over: bool = False):
        """Cheapest position for ``v`` in ``seq``: (new duration, index) or None."""
        d = self.d
        best = None
        if len(seq) <= 2:
            a, b = seq[0], seq[-1]
            new = d[a][v] + d[v][b]
            if new < INF and (allow_over or new <= self.limit):
                return new, 1
            return None
        dv = d[v]
        for pos in range(1, len(seq)):
            a, b = seq[pos - 1], seq[pos]
            new = duration + d[a][v] + dv[b] - d[a][b]
            if new < INF and (allow_over or new <= self.limit):
                if best is None or new < best[0]:
                    best = (new, pos)
        return best

    def best_block_insertion(self, seq, duration: float, block):
        """Cheapest feasible position for an ordered block of vertices."""
        d = self.d
        inner = sum(d[x][y] for x, y in zip(block, block[1:]))
        if inner == INF:
            return None
        first, last = block[0], block[-1]
        best = None
        if len(seq) <= 2:
            new = d[seq[0]][first] + inner + d[last][seq[-1]]
            return (new, 1) if new <= self.limit else None
        for pos in range(1, len(seq)):
            a, b = seq[pos - 1], seq[pos]
            new = duration + d[a][first] + inner + d[last][b] - d[a][b]
            if new <= self.limit and (best is None or new < best[0]):
                best = (new, pos)
        return best

    def removal_duration(self, seq, duration: float, pos: int, count: int = 1) -> float:
        """Duration after removing ``count`` consecutive vertices at ``pos``."""
        if len(seq) - count <= 2:
            return 0.0
        d = self.d
        a, b = seq[pos - 1], seq[pos + count]
        removed = d[a][seq[pos]] + d[seq[pos + count - 1]][b]
        removed += sum(d[x][y] for x, y in zip(seq[pos:pos + count], seq[pos + 1:pos + count]))
        return duration - removed + d[a][b]

    def can_remove(self, seq, pos: int, count: int = 1) -> bool:
        if len(seq) - count <= 2:
            return True
        return self.d[seq[pos - 1]][seq[pos + count]] < INF
