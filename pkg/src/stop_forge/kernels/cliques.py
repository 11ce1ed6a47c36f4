"""Maximal clique enumeration (Bron-Kerbosch with Tomita pivoting)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

DEFAULT_CLIQUE_CAP = 100_000


@dataclass
class UndirectedGraph:
    vertices: list[Hashable]
    edges: set[frozenset] = field(default_factory=set)

    def __post_init__(self):
        self.edges = {frozenset(e) for e in self.edges}
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"self-loop or malformed edge {set(e)}")

    def neighbours(self) -> dict[Hashable, set]:
        nb: dict[Hashable, set] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            nb.setdefault(a, set()).add(b)
            nb.setdefault(b, set()).add(a)
        return nb


@dataclass
class CliqueEnumeration:
    cliques: list[frozenset]
    truncated: bool = False

    def __iter__(self):
        return iter(self.cliques)

    def __len__(self):
        return len(self.cliques)

    def as_set(self) -> set[frozenset]:
        return set(self.cliques)


def _order_key(c: Iterable) -> tuple:
    members = sorted(c)
    return (-len(members), members)


def maximal_cliques(g: UndirectedGraph, cap: int = DEFAULT_CLIQUE_CAP) -> CliqueEnumeration:
    """All maximal cliques, singletons for isolated vertices included.

    Cliques come sorted by decreasing size, then lexicographically. If more
    than ``cap`` cliques exist the search stops and ``truncated`` is set.
    """
    nb = g.neighbours()
    found: list[frozenset] = []
    truncated = False

    def expand(r: list, p: set, x: set) -> bool:
        if not p and not x:
            found.append(frozenset(r))
            return len(found) < cap
        pivot = max(p | x, key=lambda u: len(p & nb[u]))
        for v in sorted(p - nb[pivot]):
            if not expand(r + [v], p & nb[v], x & nb[v]):
                return False
            p = p - {v}
            x = x | {v}
        return True

    if nb:
        truncated = not expand([], set(nb), set())
    found.sort(key=_order_key)
    return CliqueEnumeration(found, truncated)
