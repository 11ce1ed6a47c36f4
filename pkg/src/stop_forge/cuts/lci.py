"""Lifted cover inequalities for the profit knapsack ``sum p_i y_i <= floor(tau)``."""

from __future__ import annotations

import math

from ..kernels.knapsack import knapsack_max
from .base import LCI, Cut

LCI_PRECISION = 1e-5


def _order(items, ybar, profits):
    return sorted(items, key=lambda v: (-ybar.get(v, 0.0), -profits[v], v))


def find_cover(ybar: dict, profits: dict, capacity: int) -> list[int] | None:
    """Greedy minimal cover: take by decreasing y, then drop while still a cover."""
    order = _order(profits, ybar, profits)
    cover, weight = [], 0
    for v in order:
        cover.append(v)
        weight += profits[v]
        if weight > capacity:
            break
    else:
        return None
    for v in sorted(cover, key=lambda v: (ybar.get(v, 0.0), profits[v], -v)):
        if weight - profits[v] > capacity:
            cover.remove(v)
            weight -= profits[v]
    return sorted(cover)


def lift_cover(cover: list[int], ybar: dict, profits: dict, capacity: int) -> dict[int, int]:
    """Sequential up-lifting of the cover inequality; exact knapsack per step."""
    coef = {v: 1 for v in cover}
    rhs = len(cover) - 1
    rest = [v for v in _order(profits, ybar, profits) if v not in coef]
    for j in rest:
        room = capacity - profits[j]
        if room < 0:
            best = 0
        else:
            items = list(coef)
            best, _ = knapsack_max([coef[v] for v in items], [profits[v] for v in items], room)
        mu = rhs - best
        if mu > 0:
            coef[j] = mu
    return coef


def separate_lci(point, profits: dict, tau: float, precision: float = LCI_PRECISION
                 ) -> Cut | None:
    ybar = point if isinstance(point, dict) else point.ybar
    profits = {v: int(p) for v, p in profits.items()}
    capacity = math.floor(tau + 1e-6)
    if capacity < 0 or sum(profits.values()) <= capacity:
        return None
    cover = find_cover(ybar, profits, capacity)
    if cover is None:
        return None
    coef = lift_cover(cover, ybar, profits, capacity)
    cut = Cut(LCI, {("y", v): float(c) for v, c in coef.items()}, "<=", float(len(cover) - 1),
              meta={"cover": tuple(cover), "tau": tau})
    cut.violation = cut.activity({("y", v): y for v, y in ybar.items()}) - cut.rhs
    return cut if cut.violation > precision else None
