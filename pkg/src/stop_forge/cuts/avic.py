"""Arc-vertex inference cuts, separated by complete enumeration."""

from __future__ import annotations

from .base import AVIC, Cut


def bidirectional_pairs(instance) -> list[tuple[int, int]]:
    return sorted((i, j) for (i, j) in instance.arcs if i < j and (j, i) in instance.arcs)


def separate_avics(instance, point=None) -> list[Cut]:
    """Two cuts per pair of opposite arcs: ``+-(y_i - y_j) + x_ij + x_ji <= 1``."""
    cuts = []
    for i, j in bidirectional_pairs(instance):
        for a, b in ((i, j), (j, i)):
            cut = Cut(AVIC, {("y", a): 1.0, ("y", b): -1.0,
                             ("x", (i, j)): 1.0, ("x", (j, i)): 1.0}, "<=", 1.0,
                      meta={"pair": (i, j)})
            if point is not None:
                cut.evaluate(point)
            cuts.append(cut)
    return cuts
