"""``stop-forge`` command line: solve, bench, convert, validate."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bench
from .instance import ParseError, StructuralError, parse_instance, validate_solution
from .lns import LnsConfig
from .solver import ALGOS, run

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_EXHAUSTED = 3
EXIT_INVALID = 4


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def _read_instance(path: str):
    p = Path(path)
    return parse_instance(p.read_text(), format="stop", name=p.stem)


# ------------------------------------------------------------------ solve


def solve_report(inst, res, algo: str, lns_iters: int, seed: int) -> dict:
    prep = res.prepared
    report = bench.solution_json(inst.name, res.solution, seed)
    report.update({
        "status": res.status,
        "algo": bench.algo_tag(algo, lns_iters),
        "message": prep.message,
        "lp_bound": prep.lp_bound,
        "dual_bound": prep.dual_bound,
        "times": res.times,
        "pumps": res.pump.pumps_used if res.pump else 0,
        "perturbations": res.pump.perturbations if res.pump else [],
        "lns_iterations": res.lns.iterations if res.lns else 0,
        "pr_calls": res.lns.pr_calls if res.lns else 0,
        "stopped_on_stall": res.lns.stopped_on_stall if res.lns else False,
        "cut_trace": [t.as_dict() for t in prep.cuts.trace] if prep.cuts else [],
    })
    return report


def cmd_solve(args) -> int:
    try:
        inst = _read_instance(args.instance)
    except OSError as exc:
        return _fail(f"cannot read {args.instance}: {exc}")
    except ParseError as exc:
        return _fail(f"{args.instance}: {exc}")
    cfg = LnsConfig(max_iter=args.lns_iters, stop_on_stall=args.stop_on_stall)
    res = run(inst, args.algo, lns_iters=args.lns_iters, seed=args.seed, lns_cfg=cfg)
    report = solve_report(inst, res, args.algo, args.lns_iters, args.seed)
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
    if res.status == "feasible":
        for k, route in enumerate(res.solution.as_lists()):
            print(f"route {k}: {' '.join(map(str, route))}")
        print(f"profit {res.profit}")
        return EXIT_OK
    if res.status == "infeasible":
        print(f"infeasible: {res.prepared.message or 'relaxation has no solution'}")
        return EXIT_INFEASIBLE
    print(f"no feasible solution after {report['pumps']} pumps")
    return EXIT_EXHAUSTED


# ------------------------------------------------------------------ bench


def cmd_bench(args) -> int:
    try:
        seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    except ValueError:
        return _fail(f"bad seed list {args.seeds!r}")
    if not Path(args.dir).is_dir():
        return _fail(f"{args.dir} is not a directory")
    bounds = None
    if args.bounds:
        try:
            bounds = bench.read_bounds(args.bounds)
        except (OSError, ValueError) as exc:
            return _fail(f"cannot read bounds {args.bounds}: {exc}")
    try:
        reports, aggregates = bench.run_bench(args.dir, seeds, args.algo, bounds,
                                              args.lns_iters, args.workers)
    except ParseError as exc:
        return _fail(str(exc))
    text = bench.write_csv(reports, aggregates, bounds is not None, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- convert


def convert_text(text: str, pct: float, seed: int) -> str:
    """Append ``M`` to ``ceil(pct * interior)`` uniformly chosen interior
    point lines, leaving every other byte untouched."""
    if not 0.0 <= pct <= 1.0:
        raise ValueError("pct must lie in [0, 1]")
    inst = parse_instance(text, format="top")
    interior = list(range(1, inst.n - 1))
    # guard against 0.05 * 100 landing a hair above 5
    count = math.ceil(pct * len(interior) - 1e-9)
    if count == 0:
        return text
    rng = np.random.default_rng(seed)
    chosen = {int(v) for v in rng.choice(interior, size=count, replace=False)}
    lines = text.splitlines(keepends=True)
    point = -3  # three header lines come first
    for no, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if point in chosen:
            body = line.rstrip("\r\n")
            lines[no] = body + " M" + line[len(body):]
        point += 1
    return "".join(lines)


def cmd_convert(args, parser) -> int:
    if not 0.0 <= args.pct <= 1.0:
        parser.error("--pct must lie in [0, 1]")
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        return _fail(f"cannot read {args.input}: {exc}")
    try:
        out = convert_text(text, args.pct, args.seed)
    except ParseError as exc:
        return _fail(f"{args.input}: {exc}")
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


# --------------------------------------------------------------- validate


def cmd_validate(args) -> int:
    try:
        inst = _read_instance(args.instance)
        payload = json.loads(Path(args.solution).read_text())
    except OSError as exc:
        return _fail(f"cannot read input: {exc}")
    except ParseError as exc:
        return _fail(f"{args.instance}: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(f"{args.solution}: bad JSON ({exc})")
    routes = payload.get("routes") if isinstance(payload, dict) else None
    if not isinstance(routes, list) or not all(isinstance(r, list) for r in routes):
        return _fail(f"{args.solution}: expected an object with a 'routes' list of lists")
    try:
        routes = [[int(v) for v in r] for r in routes]
    except (TypeError, ValueError):
        return _fail(f"{args.solution}: route entries must be vertex ids")
    report = validate_solution(inst, routes)
    structural = [v for v in report.violations if v.kind == "unknown-vertex"]
    if structural:
        for v in structural:
            print(f"structural error: {v.message} (route {v.route})", file=sys.stderr)
        return EXIT_ERROR
    if report.feasible:
        profit = sum(inst.profit.get(v, 0) for r in routes for v in set(r[1:-1]))
        print(f"feasible: {len(routes)} routes, profit {profit}")
        return EXIT_OK
    for v in report.violations:
        where = "" if v.route is None else f" route {v.route}"
        print(f"{v.kind}{where}: {v.message}")
    return EXIT_INVALID


# ------------------------------------------------------------------ entry


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stop-forge",
                                     description="Steiner Team Orienteering solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=ALGOS, default="ofp-cuts")
    p.add_argument("--lns-iters", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stop-on-stall", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("bench", help="seeded campaign over a directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--seeds", required=True, help="comma separated, e.g. 1,2,3")
    p.add_argument("--algo", choices=ALGOS, default="ofp-cuts")
    p.add_argument("--bounds")
    p.add_argument("--out")
    p.add_argument("--lns-iters", type=int, default=5000)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("convert", help="mark random interior vertices mandatory")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pct", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("validate", help="check a solution file")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "lns_iters", 0) < 0:
        parser.error("--lns-iters must be nonnegative")
    if args.command == "solve":
        return cmd_solve(args)
    if args.command == "bench":
        return cmd_bench(args)
    if args.command == "convert":
        return cmd_convert(args, parser)
    return cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
