"""Maximum flow by FIFO preflow push-relabel."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable

EPS = 1e-12


@dataclass
class CapacitatedDigraph:
    vertices: list[Hashable]
    capacity: dict[tuple[Hashable, Hashable], float] = field(default_factory=dict)

    def __post_init__(self):
        for arc, c in self.capacity.items():
            if not (c >= 0 and c < float("inf")):
                raise ValueError(f"capacity of {arc} must be finite and nonnegative")

    def add_arc(self, i, j, cap: float) -> None:
        if not (cap >= 0 and cap < float("inf")):
            raise ValueError("capacity must be finite and nonnegative")
        self.capacity[(i, j)] = self.capacity.get((i, j), 0.0) + cap

    def reversed(self) -> CapacitatedDigraph:
        return CapacitatedDigraph(list(self.vertices),
                                  {(j, i): c for (i, j), c in self.capacity.items()})


@dataclass
class MaxFlowResult:
    flow_value: float
    source_side: frozenset
    flow: dict[tuple[Hashable, Hashable], float]


def max_flow(g: CapacitatedDigraph, source, sink) -> MaxFlowResult:
    """Maximum source-sink flow and the residual-reachable source side of a min cut.

    Excess that cannot reach the sink is pushed back to the source, so the
    returned ``flow`` is a proper flow (conservation holds at every inner vertex).
    """
    if source == sink:
        raise ValueError("source and sink must differ")
    index = {v: k for k, v in enumerate(g.vertices)}
    for v in (source, sink):
        if v not in index:
            index[v] = len(index)
    n = len(index)
    # edge arrays: head, residual capacity, position of the paired edge
    head: list[int] = []
    res: list[float] = []
    adj: list[list[int]] = [[] for _ in range(n)]
    arc_edge: dict[tuple, int] = {}
    for (i, j), c in g.capacity.items():
        if i == j:
            continue
        a, b = index[i], index[j]
        e = len(head)
        head.extend((b, a))
        res.extend((c, 0.0))
        adj[a].append(e)
        adj[b].append(e + 1)
        arc_edge[(i, j)] = e
    cap0 = list(res)

    s, t = index[source], index[sink]
    height = [0] * n
    excess = [0.0] * n
    height[s] = n
    current = [0] * n
    queue: deque[int] = deque()
    active = [False] * n

    for e in adj[s]:
        c = res[e]
        if c > 0:
            v = head[e]
            res[e] = 0.0
            res[e ^ 1] += c
            excess[v] += c
            excess[s] -= c
            if v != t and not active[v] and excess[v] > EPS:
                active[v] = True
                queue.append(v)

    while queue:
        u = queue.popleft()
        active[u] = False
        edges = adj[u]
        while excess[u] > EPS:
            if current[u] == len(edges):
                # relabel
                best = None
                for e in edges:
                    if res[e] > EPS:
                        h = height[head[e]]
                        if best is None or h < best:
                            best = h
                if best is None:
                    break
                height[u] = best + 1
                current[u] = 0
                continue
            e = edges[current[u]]
            v = head[e]
            if res[e] > EPS and height[u] == height[v] + 1:
                delta = min(excess[u], res[e])
                res[e] -= delta
                res[e ^ 1] += delta
                excess[u] -= delta
                excess[v] += delta
                if v != s and v != t and not active[v] and excess[v] > EPS:
                    active[v] = True
                    queue.append(v)
            else:
                current[u] += 1

    # source side: residual-reachable from the source
    seen = [False] * n
    seen[s] = True
    stack = [s]
    while stack:
        u = stack.pop()
        for e in adj[u]:
            if res[e] > EPS and not seen[head[e]]:
                seen[head[e]] = True
                stack.append(head[e])
    names = {k: v for v, k in index.items()}
    side = frozenset(names[k] for k in range(n) if seen[k])
    flow = {arc: cap0[e] - res[e] for arc, e in arc_edge.items()}
    value = excess[t]
    return MaxFlowResult(max(value, 0.0), side, flow)
