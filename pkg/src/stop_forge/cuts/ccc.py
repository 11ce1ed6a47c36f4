"""Clique conflict cut separation through maximum flows on the support graph."""

from __future__ import annotations

from ..kernels.maxflow import CapacitatedDigraph, max_flow
from .base import CCC, Cut
from .conflicts import ConflictStructure

SUPPORT_TOL = 1e-9
CCC_PRECISION = 0.01
FLOW_TOL = 1e-9

_BETA = ("beta",)


def _cut_for(point, sigma, inner: set, incoming: bool) -> Cut:
    """``sum x over arcs entering (or leaving) inner >= sum y over sigma``."""
    if incoming:
        arcs = [a for a in point.arcs if a[1] in inner and a[0] not in inner]
    else:
        arcs = [a for a in point.arcs if a[0] in inner and a[1] not in inner]
    coeffs = {("x", a): 1.0 for a in arcs}
    for i in sigma:
        coeffs[("y", i)] = -1.0
    cut = Cut(CCC, coeffs, ">=", 0.0,
              meta={"clique": tuple(sorted(sigma)), "set": tuple(sorted(inner)),
                    "form": "in" if incoming else "out"})
    return cut.evaluate(point)


def separate_cccs(point, conflicts: ConflictStructure, m: float,
                  precision: float = CCC_PRECISION, trace: list | None = None) -> list[Cut]:
    """Scan the maximal cliques in order; one cut at most per active clique.

    The entering form is tried first; the leaving form only when the first
    max flow saturates the clique demand. Emitting a cut deactivates every
    clique sharing a vertex of positive value with it. Activity flags start
    fresh on every call. ``trace`` (if a list) receives one record per
    clique tested.
    """
    s, t = conflicts.origin, conflicts.destination
    ybar = point.ybar
    support = {a: v for a, v in point.xbar.items() if v > SUPPORT_TOL}
    nodes = list(point.vertices)
    forward = CapacitatedDigraph(nodes, dict(support))
    backward = forward.reversed()
    members = conflicts.members
    active = [True] * len(conflicts.cliques)
    cuts: list[Cut] = []

    def deactivate(sigma):
        for i in sigma:
            if ybar.get(i, 0.0) > SUPPORT_TOL:
                for k in members.get(i, ()):
                    active[k] = False

    for k, sigma in enumerate(conflicts.cliques):
        if not active[k]:
            continue
        demand = sum(ybar.get(i, 0.0) for i in sigma)
        record = {"clique": tuple(sorted(sigma)), "demand": demand}
        if trace is not None:
            trace.append(record)
        if demand <= precision:
            continue
        for incoming, base, root in ((True, forward, s), (False, backward, t)):
            g = CapacitatedDigraph(nodes + [_BETA], dict(base.capacity))
            for i in sigma:
                g.add_arc(i, _BETA, float(m))
            res = max_flow(g, root, _BETA)
            record["flow_in" if incoming else "flow_out"] = res.flow_value
            if res.flow_value < demand - FLOW_TOL:
                inner = (set(nodes) - set(res.source_side)) | set(sigma)
                cut = _cut_for(point, sigma, inner, incoming)
                if cut.violation > precision:
                    cut.meta["flow"] = res.flow_value
                    cuts.append(cut)
                    record["emitted"] = cut.meta["form"]
                    deactivate(sigma)
                # a deficit on the entering form settles this clique
                break
    return cuts
