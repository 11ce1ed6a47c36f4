"""Bounded elite pool used as long-term memory."""

from __future__ import annotations

from ..instance import Solution
from .core import better


class Pool:
    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("pool capacity must be positive")
        self.capacity = capacity
        self.members: list[Solution] = []
        self._keys: list = []

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, sol: Solution) -> bool:
        return sol.key() in self._keys

    def best(self) -> Solution:
        top = self.members[0]
        for s in self.members[1:]:
            if better(s, top):
                top = s
        return top

    def worst_index(self) -> int:
        k = 0
        for i, s in enumerate(self.members[1:], start=1):
            w = self.members[k]
            if (s.profit_sum, -s.total_time) < (w.profit_sum, -w.total_time):
                k = i
        return k

    def worst(self) -> Solution:
        return self.members[self.worst_index()]

    def insert(self, sol: Solution) -> None:
        """Append a copy, or overwrite the worst member when full."""
        sol = sol.copy()
        if len(self.members) < self.capacity:
            self.members.append(sol)
            self._keys.append(sol.key())
        else:
            k = self.worst_index()
            self.members[k] = sol
            self._keys[k] = sol.key()


def pool_try_add(pool: Pool, candidate: Solution) -> bool:
    """Add when absent and better than the current worst member."""
    if candidate in pool:
        return False
    if pool.members and not better(candidate, pool.worst()):
        return False
    pool.insert(candidate)
    return True
