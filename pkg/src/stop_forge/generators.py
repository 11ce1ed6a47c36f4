"""Random Euclidean STOP instances for tests and desk-scale experiments."""

from __future__ import annotations

import math

import numpy as np

from .instance import Instance, build_graph, shortest_times


def random_instance(n: int, fleet: int = 2, tmax: float | None = None, tightness: float = 0.5,
                    n_mandatory: int | None = None, seed=0, scale: float = 20.0,
                    max_profit: int = 15, name: str | None = None) -> Instance:
    """Complete Euclidean digraph on ``n`` uniform points in a square.

    Without an explicit ``tmax`` the limit is ``tightness`` times the largest
    origin-vertex-destination detour. Mandatory vertices (at most ``fleet``,
    5% of the interior by default) are drawn among vertices that fit a route
    on their own, so the instance is feasible by construction.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, scale, size=(n, 2))
    coords = [(float(round(x, 1)), float(round(y, 1))) for x, y in pts]
    s, t = 0, n - 1
    profits = {v: int(rng.integers(1, max_profit + 1)) for v in range(1, n - 1)}
    inst = build_graph(Instance(name or f"rand{n}_{fleet}_{seed}", n, s, t, frozenset(),
                                profits, {}, fleet, 0.0, coords=coords))
    R = shortest_times(inst).values
    detour = [R[s, v] + R[v, t] for v in range(1, n - 1)] or [R[s, t]]
    if tmax is None:
        tmax = max(R[s, t], tightness * max(detour))
    tmax = float(math.floor(tmax * 10 + 1) / 10)  # one decimal, as in benchmark files
    if n_mandatory is None:
        n_mandatory = math.ceil(0.05 * (n - 2)) if n > 2 else 0
    fits = [v for v in range(1, n - 1) if R[s, v] + R[v, t] <= tmax]
    k = min(n_mandatory, fleet, len(fits))
    mandatory = frozenset(int(v) for v in rng.choice(fits, size=k, replace=False)) if k else frozenset()
    for v in mandatory:
        profits.pop(v)
    return Instance(inst.name, n, s, t, mandatory, profits, inst.arcs, fleet, tmax, coords=coords)


def to_text(instance: Instance) -> str:
    """Serialise in the STOP file grammar (origin first, destination last)."""
    if instance.coords is None:
        raise ValueError("instance has no coordinates")
    lines = [f"n {instance.n}", f"m {instance.fleet_size}", f"tmax {instance.time_limit:g}"]
    for v in range(instance.n):
        x, y = instance.coords[v]
        score = instance.profit.get(v, 0)
        tail = " M" if v in instance.mandatory else ""
        lines.append(f"{x:g}\t{y:g}\t{score}{tail}")
    return "\n".join(lines) + "\n"
