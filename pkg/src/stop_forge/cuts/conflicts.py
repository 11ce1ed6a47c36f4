"""Conflicting vertex pairs and their maximal cliques."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..instance import TIME_TOL, Instance, RMatrix
from ..kernels.cliques import DEFAULT_CLIQUE_CAP, UndirectedGraph, maximal_cliques


def conflict_pairs(r: RMatrix, T: float, origin: int, destination: int,
                   vertices) -> set[frozenset]:
    """Pairs {i, j} such that neither visiting order fits a route within ``T``.

    Both orders are judged with aggregated R entries, so unreachable pairs
    (infinite entries) always conflict.
    """
    nodes = [v for v in vertices if v not in (origin, destination)]
    if len(nodes) < 2:
        return set()
    R = r.values
    idx = np.array(nodes)
    rs = R[origin, idx]
    rt = R[idx, destination]
    sub = R[np.ix_(idx, idx)]
    with np.errstate(invalid="ignore"):
        forward = rs[:, None] + sub + rt[None, :]  # i before j
    limit = T + TIME_TOL
    both = (forward > limit) & (forward.T > limit)
    out = set()
    a, b = np.nonzero(np.triu(both, k=1))
    for p, q in zip(a.tolist(), b.tolist()):
        out.add(frozenset((nodes[p], nodes[q])))
    return out


@dataclass
class ConflictStructure:
    origin: int
    destination: int
    pairs: set[frozenset]
    graph: UndirectedGraph
    cliques: list[frozenset]
    truncated: bool = False

    @property
    def members(self) -> dict[int, list[int]]:
        """Vertex -> indices of the cliques containing it."""
        out: dict[int, list[int]] = {}
        for k, c in enumerate(self.cliques):
            for v in c:
                out.setdefault(v, []).append(k)
        return out


def build_conflicts(instance: Instance, r: RMatrix | None = None,
                    cap: int = DEFAULT_CLIQUE_CAP) -> ConflictStructure:
    r = r if r is not None else instance.r
    if r is None:
        raise ValueError("instance needs an R matrix (run preprocess first)")
    pairs = conflict_pairs(r, instance.time_limit, instance.origin, instance.destination,
                           instance.vertices)
    graph = UndirectedGraph(list(instance.interior), pairs)
    enum = maximal_cliques(graph, cap=cap)
    return ConflictStructure(instance.origin, instance.destination, pairs, graph,
                             enum.cliques, enum.truncated)
