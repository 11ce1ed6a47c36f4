"""Exact 0-1 knapsack by Bellman recursion over integer capacities."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def knapsack_max(values: Sequence[int], weights: Sequence[int], capacity: int
                 ) -> tuple[int, frozenset[int]]:
    """Return (best value, chosen item indices) for the 0-1 knapsack."""
    if len(values) != len(weights):
        raise ValueError("values and weights differ in length")
    if capacity < 0 or any(w < 0 for w in weights):
        raise ValueError("weights and capacity must be nonnegative")
    n = len(values)
    capacity = int(capacity)
    if n == 0 or capacity == 0 and all(w > 0 for w in weights):
        return 0, frozenset()

    dp = np.zeros(capacity + 1, dtype=np.int64)
    take = np.zeros((n, capacity + 1), dtype=bool)
    for k in range(n):
        v, w = int(values[k]), int(weights[k])
        if v <= 0 or w > capacity:
            continue
        cand = dp[: capacity + 1 - w] + v
        better = cand > dp[w:]
        take[k, w:] = better
        dp[w:] = np.where(better, cand, dp[w:])

    chosen = []
    c = capacity
    for k in range(n - 1, -1, -1):
        if take[k, c]:
            chosen.append(k)
            c -= int(weights[k])
    return int(dp[capacity]), frozenset(chosen)
