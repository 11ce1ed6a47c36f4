"""Seeded benchmark campaigns, gap bookkeeping and result files."""

from __future__ import annotations

import csv
import io
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .instance import Instance, Solution, parse_instance
from .pump import PumpConfig
from .solver import RunResult, parse_algo, prepare, run

# marker stored in a bounds table for instances known to have no solution
INFEASIBLE = "infeasible"


def gap(best_known, lb) -> float | None:
    """Percentage gap of an achieved profit ``lb`` against ``best_known``.

    ``best_known`` is a number, ``INFEASIBLE`` for a proven infeasible
    instance, or ``NaN``/``None``-like "no bound" which the caller maps to
    100. ``lb`` is None when no feasible solution was produced.
    """
    if best_known == INFEASIBLE:
        return 0.0
    if lb is None or best_known is None:
        return 100.0
    best_known = float(best_known)
    if best_known == 0.0:
        if lb == 0:
            return 0.0
        # a positive profit against a zero bound: the bound is wrong, not us
        return None
    return 100.0 * (best_known - float(lb)) / best_known


def read_bounds(path) -> dict:
    """``instance_name,best_lb`` table. Empty or ``NA`` cells mean no known
    bound (maps to None); ``infeasible`` marks proven infeasibility."""
    out = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            name = (row.get("instance_name") or "").strip()
            if not name:
                continue
            raw = (row.get("best_lb") or "").strip()
            if raw.lower() == INFEASIBLE:
                out[name] = INFEASIBLE
            elif raw == "" or raw.upper() == "NA":
                out[name] = None
            else:
                out[name] = float(raw)
    return out


# --------------------------------------------------------------- reports


@dataclass
class RunReport:
    instance: str
    algo: str
    seed: int
    status: str
    profit: int | None
    feasible: bool
    pumps: int
    lns_iters: int
    time_prepare: float
    time_pump: float
    time_lns: float
    gap: float | None = None

    @classmethod
    def from_run(cls, name: str, tag: str, seed: int, res: RunResult) -> RunReport:
        return cls(
            instance=name,
            algo=tag,
            seed=seed,
            status=res.status,
            profit=res.profit,
            feasible=res.status == "feasible",
            pumps=res.pump.pumps_used if res.pump else 0,
            lns_iters=res.lns.iterations if res.lns else 0,
            time_prepare=res.times.get("prepare", 0.0),
            time_pump=res.times.get("pump", 0.0),
            time_lns=res.times.get("lns", 0.0),
        )

    @property
    def total_time(self) -> float:
        return self.time_prepare + self.time_pump + self.time_lns


def algo_tag(algo: str, lns_iters: int) -> str:
    return f"{algo}+lns{lns_iters}"


def set_name(instance: str) -> str:
    """Benchmark set of an instance name: ``p4.3.q`` belongs to ``p4``."""
    return instance.split(".", 1)[0]


def solution_json(instance: str, solution: Solution | None, seed: int) -> dict:
    routes = solution.as_lists() if solution is not None else []
    profit = solution.profit_sum if solution is not None else None
    return {"instance": instance, "routes": routes, "profit": profit, "seed": seed}


def load_instance(path) -> Instance:
    path = Path(path)
    return parse_instance(path.read_text(), format="stop", name=path.stem)


# ------------------------------------------------------------ campaigns


def _run_instance(args) -> list[RunReport]:
    path, seeds, algo, lns_iters, pump_cfg = args
    inst = load_instance(path)
    _, use_cuts = parse_algo(algo)
    prepared = prepare(inst, use_cuts)
    tag = algo_tag(algo, lns_iters)
    out = []
    for seed in seeds:
        res = run(inst, algo, lns_iters=lns_iters, seed=seed, pump_cfg=pump_cfg,
                  prepared=prepared)
        out.append(RunReport.from_run(inst.name, tag, seed, res))
    return out


def run_bench(directory, seeds, algo: str = "ofp-cuts", bounds: dict | None = None,
              lns_iters: int = 5000, workers: int = 1, pattern: str = "*.txt",
              pump_cfg: PumpConfig | None = None):
    """Run every instance file in ``directory`` once per seed.

    Returns (detail reports, aggregate rows). Detail rows come back sorted
    by (instance, seed) whatever the worker count.
    """
    parse_algo(algo)
    paths = sorted(Path(directory).glob(pattern))
    jobs = [(p, list(seeds), algo, lns_iters, pump_cfg) for p in paths]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_run_instance, jobs))
    else:
        chunks = [_run_instance(j) for j in jobs]
    reports = sorted((r for c in chunks for r in c), key=lambda r: (r.instance, r.seed))
    if bounds is not None:
        for r in reports:
            if r.instance in bounds:
                proven = r.status == "infeasible"
                r.gap = 0.0 if proven else gap(bounds[r.instance], r.profit)
    return reports, aggregate(reports, bounds)


def instance_gap(reports: list[RunReport], best_known) -> float | None:
    """Gap of the seed-averaged profit of one instance's runs."""
    if any(r.status == "infeasible" for r in reports):
        return 0.0
    ok = [r.profit for r in reports if r.feasible]
    lb = statistics.fmean(ok) if ok else None
    return gap(best_known, lb)


def aggregate(reports: list[RunReport], bounds: dict | None = None) -> list[dict]:
    """One row per (set, algorithm): gap statistics over instances, profit
    and time statistics over runs."""
    groups: dict[tuple[str, str], dict[str, list[RunReport]]] = {}
    for r in reports:
        groups.setdefault((set_name(r.instance), r.algo), {}).setdefault(r.instance, []).append(r)
    rows = []
    for (sname, tag), per_inst in sorted(groups.items()):
        runs = [r for rs in per_inst.values() for r in rs]
        profits = [r.profit for r in runs if r.feasible]
        row = {
            "set": sname,
            "algo": tag,
            "instances": len(per_inst),
            "runs": len(runs),
            "feasible_runs": len(profits),
            "avg_profit": statistics.fmean(profits) if profits else None,
            "best_profit": max(profits) if profits else None,
            "avg_time": statistics.fmean(r.total_time for r in runs),
        }
        if bounds is not None:
            gaps = [instance_gap(rs, bounds[name]) for name, rs in sorted(per_inst.items())
                    if name in bounds]
            gaps = [g for g in gaps if g is not None]
            row["avg_gap"] = statistics.fmean(gaps) if gaps else None
            row["stdev_gap"] = statistics.pstdev(gaps) if gaps else None
        rows.append(row)
    return rows


# ---------------------------------------------------------------- output

DETAIL_COLUMNS = ["row", "set", "instance", "algo", "seed", "status", "profit", "feasible",
                  "pumps", "lns_iters", "time_prepare", "time_pump", "time_lns"]
AGGREGATE_COLUMNS = ["instances", "runs", "feasible_runs", "avg_profit", "best_profit",
                     "avg_time"]
GAP_COLUMNS = ["gap", "avg_gap", "stdev_gap"]


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    return v


def write_csv(reports: list[RunReport], aggregates: list[dict], with_gap: bool, out=None) -> str:
    """Detail rows then aggregate rows under one fixed header."""
    columns = DETAIL_COLUMNS + AGGREGATE_COLUMNS + (GAP_COLUMNS if with_gap else [])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in reports:
        d = asdict(r)
        d["row"] = "detail"
        d["set"] = set_name(r.instance)
        if not with_gap:
            d.pop("gap")
        w.writerow({k: _cell(d.get(k)) for k in columns})
    for a in aggregates:
        d = dict(a, row="aggregate")
        w.writerow({k: _cell(d.get(k)) for k in columns})
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


def write_solution(path, instance: str, solution: Solution | None, seed: int) -> None:
    Path(path).write_text(json.dumps(solution_json(instance, solution, seed), indent=2) + "\n")
