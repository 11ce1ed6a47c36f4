"""End-to-end pipeline: preprocessing, optional cutting planes, pump, LNS."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .cuts import KINDS, cutting_plane
from .cuts.cutting_plane import CuttingPlaneResult
from .instance import InfeasibleInstanceError, Instance, Solution, preprocess
from .lns import LnsConfig, LnsResult, lns_run
from .lp import LinearModel, LPInfeasibleError, build_model, open_session, solve_lp
from .pump import PumpConfig, PumpOutcome, pump

ALGOS = ("fp-raw", "fp-cuts", "ofp-raw", "ofp-cuts")


def parse_algo(algo: str) -> tuple[float, bool]:
    """Decay rate and cut flag for an algorithm tag."""
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGOS)}")
    pump_kind, model_kind = algo.split("-")
    return (0.9 if pump_kind == "ofp" else 0.0), model_kind == "cuts"


@dataclass
class Prepared:
    """Seed-independent work: pruned instance, (reinforced) model and bounds."""

    instance: Instance | None
    model: LinearModel | None
    cuts: CuttingPlaneResult | None
    lp_bound: float | None
    dual_bound: float | None
    status: str = "ok"  # or "infeasible"
    message: str = ""
    prep_time: float = 0.0


def prepare(instance: Instance, use_cuts: bool, enable=KINDS, backend: str | None = None
            ) -> Prepared:
    t0 = time.perf_counter()
    try:
        pp = preprocess(instance)
    except InfeasibleInstanceError as exc:
        return Prepared(None, None, None, None, None, "infeasible", str(exc),
                        time.perf_counter() - t0)
    model = build_model(pp, pp.r)
    try:
        if use_cuts:
            res = cutting_plane(pp, model, enable=enable, backend=backend)
            return Prepared(pp, res.model, res, res.lp_bound, res.bound,
                            prep_time=time.perf_counter() - t0)
        point = solve_lp(model, open_session(model, backend))
    except LPInfeasibleError as exc:
        return Prepared(pp, model, None, None, None, "infeasible", str(exc),
                        time.perf_counter() - t0)
    return Prepared(pp, model, None, point.objective, point.objective,
                    prep_time=time.perf_counter() - t0)


@dataclass
class RunResult:
    status: str  # "feasible" | "infeasible" | "exhausted"
    solution: Solution | None
    prepared: Prepared
    pump: PumpOutcome | None = None
    lns: LnsResult | None = None
    times: dict = field(default_factory=dict)

    @property
    def profit(self) -> int | None:
        return self.solution.profit_sum if self.solution is not None else None


def run(instance: Instance, algo: str = "ofp-cuts", lns_iters: int = 5000, seed: int = 0,
        pump_cfg: PumpConfig | None = None, lns_cfg: LnsConfig | None = None,
        prepared: Prepared | None = None, backend: str | None = None) -> RunResult:
    """Solve one instance with one seed. ``prepared`` lets seeds share the
    cutting-plane work; the pump always starts from a fresh LP workspace."""
    decay, use_cuts = parse_algo(algo)
    if prepared is None:
        prepared = prepare(instance, use_cuts, backend=backend)
    times = {"prepare": prepared.prep_time}
    if prepared.status == "infeasible":
        return RunResult("infeasible", None, prepared, times=times)
    pump_cfg = pump_cfg or PumpConfig()
    pump_cfg = PumpConfig(pump_cfg.max_pumps, decay, pump_cfg.flip_basis)
    rng = np.random.default_rng(seed)
    model = prepared.model
    try:
        outcome = pump(model, pump_cfg, rng, open_session(model, backend))
    except LPInfeasibleError:
        return RunResult("infeasible", None, prepared, times=times)
    times["pump"] = outcome.wall_time
    if not outcome.found:
        return RunResult("exhausted", None, prepared, outcome, times=times)
    if lns_cfg is None:
        lns_cfg = LnsConfig(max_iter=lns_iters)
    result = lns_run(prepared.instance, outcome.solution, lns_cfg, rng)
    times["lns"] = result.wall_time
    return RunResult("feasible", result.solution, prepared, outcome, result, times)
