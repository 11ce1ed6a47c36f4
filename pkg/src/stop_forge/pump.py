"""Feasibility Pump and its objective-aware variant over the STOP relaxation."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .instance import Instance, Solution, StructuralError, validate_solution
from .lp import INTEGRALITY_TOL, LinearModel, LPInfeasibleError, open_session, round_point


@dataclass
class PumpConfig:
    max_pumps: int = 2000
    decay: float = 0.9
    flip_basis: int = 10

    def __post_init__(self):
        if not 0.0 <= self.decay <= 1.0:
            raise ValueError("decay must lie in [0, 1]")
        if self.flip_basis < 1:
            raise ValueError("flip_basis must be at least 1")
        if self.max_pumps < 0:
            raise ValueError("max_pumps must be nonnegative")

    @classmethod
    def fp(cls, **kw) -> PumpConfig:
        return cls(decay=0.0, **kw)

    @classmethod
    def ofp(cls, **kw) -> PumpConfig:
        return cls(decay=0.9, **kw)

    def flip_range(self) -> tuple[int, int]:
        """Inclusive integer range strictly inside (K/2, 3K/2)."""
        k = self.flip_basis
        return k // 2 + 1, math.ceil(3 * k / 2) - 1


@dataclass
class PumpRecord:
    pump: int
    gamma: float
    distance: float
    objective: float
    flips: int = 0
    profit_weight: float = 0.0


@dataclass
class PumpOutcome:
    status: str  # "found" | "exhausted"
    solution: Solution | None
    pumps_used: int
    wall_time: float
    trace: list[PumpRecord] = field(default_factory=list)
    perturbations: list[int] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == "found"


def distance_objective(x_tilde: np.ndarray, gamma: float, model: LinearModel
                       ) -> tuple[np.ndarray, float]:
    """Minimisation costs and constant offset of the blended pump objective.

    ``(1 - gamma) / sqrt(|A|)`` weighs the L1 distance to ``x_tilde`` and
    ``gamma / ||p||`` weighs the negated profit. The profit term is dropped
    when every profit is zero.
    """
    x_tilde = np.asarray(x_tilde, dtype=float)
    n_arcs = len(model.arcs)
    cost = np.zeros(model.n_vars)
    offset = 0.0
    if n_arcs and gamma < 1.0:
        w = (1.0 - gamma) / math.sqrt(n_arcs)
        cost[model.x_slice()] = w * (1.0 - 2.0 * x_tilde)
        offset = w * float(np.sum(x_tilde))
    pnorm = float(np.linalg.norm(model.objective))
    if gamma > 0.0 and pnorm > 0.0:
        cost -= (gamma / pnorm) * model.objective
    return cost, offset


def l1_distance(x: np.ndarray, x_tilde: np.ndarray) -> float:
    return float(np.sum(np.abs(np.asarray(x) - np.asarray(x_tilde))))


def _is_integral(x: np.ndarray) -> bool:
    return bool(np.all(np.minimum(np.abs(x), np.abs(1.0 - x)) <= INTEGRALITY_TOL))


def perturb(x_star: np.ndarray, x_tilde: np.ndarray, cfg: PumpConfig, rng) -> tuple[np.ndarray, int]:
    """Flip a random number of entries of ``x_tilde``, largest mismatch first."""
    lo, hi = cfg.flip_range()
    n = min(int(rng.integers(lo, hi + 1)), len(x_tilde))
    gap = np.abs(x_star - x_tilde)
    order = np.argsort(-gap, kind="stable")
    nonzero = int(np.count_nonzero(gap > INTEGRALITY_TOL))
    chosen = list(order[:min(n, nonzero)])
    if len(chosen) < n:
        rest = np.setdiff1d(np.arange(len(x_tilde)), chosen)
        chosen += list(rng.choice(rest, size=n - len(chosen), replace=False))
    out = x_tilde.copy()
    idx = np.array(chosen, dtype=int)
    out[idx] = 1.0 - out[idx]
    return out, n


def extract_solution(instance: Instance, x, model: LinearModel | None = None) -> Solution:
    """Walk successor arcs from the origin, one route per selected origin arc."""
    if isinstance(x, dict):
        selected = [a for a, v in x.items() if v > 0.5]
    else:
        if model is None:
            raise ValueError("an arc-aligned vector needs its model")
        selected = [a for a, v in zip(model.arcs, np.asarray(x)) if v > 0.5]
    s, t = instance.origin, instance.destination
    succ: dict[int, list[int]] = {}
    for i, j in selected:
        if (i, j) not in instance.arcs:
            raise StructuralError(f"selected pair {i}->{j} is not an arc")
        succ.setdefault(i, []).append(j)
    for v, nxt in succ.items():
        if v != s and len(nxt) > 1:
            raise StructuralError(f"vertex {v} has {len(nxt)} selected successors")
    used = 0
    routes = []
    for first in sorted(succ.get(s, [])):
        route = [s, first]
        used += 1
        seen = {s, first}
        while route[-1] != t:
            nxt = succ.get(route[-1])
            if not nxt:
                raise StructuralError(f"route dangles at vertex {route[-1]}")
            v = nxt[0]
            if v in seen:
                raise StructuralError(f"route revisits vertex {v}")
            seen.add(v)
            route.append(v)
            used += 1
        routes.append(route)
    if used != len(selected):
        raise StructuralError("selected arcs outside the origin-destination walks")
    return Solution.from_routes(instance, routes)


def pump(model: LinearModel, cfg: PumpConfig | None = None, rng=None, session=None
         ) -> PumpOutcome:
    """Alternate LP solves and roundings until ``x`` is integral or pumps run out."""
    cfg = cfg or PumpConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    start = time.perf_counter()
    session = session or open_session(model)
    instance = model.instance
    trace: list[PumpRecord] = []
    perturbations: list[int] = []
    pnorm = float(np.linalg.norm(model.objective))
    xs = model.x_slice()

    def solve(x_tilde, gamma, flips):
        cost, offset = distance_objective(x_tilde, gamma, model)
        res = session.solve(cost, offset)
        if res.status == "infeasible":
            raise LPInfeasibleError("relaxation infeasible during pumping")
        x_star = np.clip(res.values[xs], 0.0, 1.0)
        trace.append(PumpRecord(len(trace) + 1, gamma, l1_distance(x_star, x_tilde),
                                res.objective, flips,
                                gamma / pnorm if pnorm > 0 and gamma > 0 else 0.0))
        return x_star

    def finish(x_star):
        sol = extract_solution(instance, round_point(x_star), model)
        report = validate_solution(instance, sol)
        if not report.feasible:
            raise RuntimeError(f"integral pump point decodes to an infeasible solution: {report}")
        return PumpOutcome("found", sol, len(trace), time.perf_counter() - start, trace,
                           perturbations)

    if cfg.max_pumps == 0:
        return PumpOutcome("exhausted", None, 0, time.perf_counter() - start, trace)
    gamma = 1.0
    x_star = solve(np.zeros(len(model.arcs)), gamma, 0)
    if _is_integral(x_star):
        return finish(x_star)
    x_tilde = round_point(x_star)
    flips = 0
    while len(trace) < cfg.max_pumps:
        gamma *= cfg.decay
        x_star = solve(x_tilde, gamma, flips)
        if _is_integral(x_star):
            return finish(x_star)
        rounded = round_point(x_star)
        if np.array_equal(rounded, x_tilde):
            x_tilde, flips = perturb(x_star, x_tilde, cfg, rng)
            perturbations.append(flips)
        else:
            x_tilde, flips = rounded, 0
    return PumpOutcome("exhausted", None, len(trace), time.perf_counter() - start, trace,
                       perturbations)
