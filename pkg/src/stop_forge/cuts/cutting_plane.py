"""Cutting-plane reinforcement of the LP relaxation."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lp import LinearModel, LPInfeasibleError, open_session, solve_lp
from .avic import separate_avics
from .base import AVIC, CCC, KINDS, LCI
from .ccc import separate_cccs
from .conflicts import ConflictStructure, build_conflicts
from .lci import separate_lci
from .selection import CutSelectionPolicy, select_cuts

EPS_IMPROVEMENT = 1e-3


@dataclass
class TraceRecord:
    iteration: int
    bound: float
    added: dict = field(default_factory=dict)
    found: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        row = {"iteration": self.iteration, "bound": self.bound}
        for kind in KINDS:
            row[f"added_{kind}"] = self.added.get(kind, 0)
        return row


@dataclass
class CuttingPlaneResult:
    model: LinearModel
    bound: float
    trace: list[TraceRecord]
    lp_bound: float
    point: object = None
    session: object = None

    @property
    def bounds(self) -> list[float]:
        return [r.bound for r in self.trace]

    @property
    def improvement(self) -> float:
        """Relative bound improvement over the plain relaxation, in percent."""
        if self.lp_bound <= 0:
            return 0.0
        return 100.0 * (self.lp_bound - self.bound) / self.lp_bound


def cutting_plane(instance, model: LinearModel, enable=frozenset(KINDS),
                  policy: CutSelectionPolicy | None = None,
                  conflicts: ConflictStructure | None = None,
                  epsilon: float = EPS_IMPROVEMENT, max_rounds: int | None = None,
                  backend: str | None = None) -> CuttingPlaneResult:
    """Reinforce ``model`` (a copy is modified) and return the final bound.

    Arc-vertex cuts are all added up front; then clique conflict cuts and
    one lifted cover per round are separated at the current LP point until
    nothing is found or the bound moves by at most ``epsilon``.
    """
    enable = {k.upper() for k in enable}
    unknown = enable - set(KINDS)
    if unknown:
        raise ValueError(f"unknown cut families {sorted(unknown)}")
    policy = policy or CutSelectionPolicy()
    model = model.copy()
    session = open_session(model, backend)
    point = solve_lp(model, session)
    lp_bound = point.objective
    trace = [TraceRecord(0, lp_bound)]

    if AVIC in enable:
        avics = separate_avics(instance)
        added = sum(model.add_cut(c) for c in avics)
        point = solve_lp(model, session)
        trace.append(TraceRecord(len(trace), point.objective, {AVIC: added}, {AVIC: len(avics)}))

    loop_kinds = enable & {CCC, LCI}
    if loop_kinds and CCC in loop_kinds and conflicts is None:
        conflicts = build_conflicts(instance, model.r)
    rounds = 0
    while loop_kinds and (max_rounds is None or rounds < max_rounds):
        rounds += 1
        found: dict = {}
        batch = []
        if CCC in loop_kinds:
            cccs = separate_cccs(point, conflicts, instance.fleet_size,
                                 precision=policy.precision.get(CCC, 0.01))
            found[CCC] = len(cccs)
            batch += [c for c in select_cuts(cccs, policy) if not model.has_cut(c)]
        if LCI in loop_kinds:
            lci = separate_lci(point, instance.profit, point.objective,
                               precision=policy.precision.get(LCI, 1e-5))
            found[LCI] = int(lci is not None)
            if lci is not None and not model.has_cut(lci):
                batch.append(lci)
        if not batch:
            break
        added: dict = {}
        for cut in batch:
            if model.add_cut(cut):
                added[cut.kind] = added.get(cut.kind, 0) + 1
        previous = point.objective
        point = solve_lp(model, session)
        trace.append(TraceRecord(len(trace), point.objective, added, found))
        if previous - point.objective <= epsilon:
            break
    return CuttingPlaneResult(model, point.objective, trace, lp_bound, point, session)


__all__ = ["CuttingPlaneResult", "TraceRecord", "cutting_plane", "LPInfeasibleError"]
