"""STOP data model: instances, routes, solutions, ingestion and feasibility checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

TIME_TOL = 1e-6


class ParseError(ValueError):
    """Raised on malformed instance text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class StructuralError(ValueError):
    """A route or arc selection that does not describe a walk in the graph."""


class InfeasibleInstanceError(Exception):
    """Preprocessing proved that no feasible solution exists."""

    def __init__(self, message: str, vertices: Sequence[int] = ()):
        self.vertices = tuple(vertices)
        super().__init__(message)


class RMatrix:
    """All-pairs minimum traverse times. Unreachable pairs hold ``inf``."""

    def __init__(self, values: np.ndarray):
        self.values = values

    def __getitem__(self, ij: tuple[int, int]) -> float:
        return float(self.values[ij])

    def reachable(self, i: int, j: int) -> bool:
        return bool(np.isfinite(self.values[i, j]))

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        return np.array_equal(self.values, other.values)


@dataclass(eq=False)
class Instance:
    """A STOP instance on vertex ids ``0..n-1``.

    ``vertices`` lists the ids still present (preprocessing may drop some);
    ids are never renumbered so solutions stay comparable to the input file.
    """

    name: str
    n: int
    origin: int
    destination: int
    mandatory: frozenset[int]
    profit: dict[int, int]
    arcs: dict[tuple[int, int], float]
    fleet_size: int
    time_limit: float
    coords: list[tuple[float, float]] | None = None
    vertices: tuple[int, ...] | None = None
    r: RMatrix | None = None

    def __post_init__(self):
        if self.vertices is None:
            self.vertices = tuple(range(self.n))
        if self.origin == self.destination:
            raise ValueError("origin and destination must differ")
        if self.fleet_size < 1:
            raise ValueError("fleet size must be positive")
        if self.time_limit < 0:
            raise ValueError("time limit must be nonnegative")
        if self.mandatory & self.profit.keys():
            raise ValueError("mandatory and profitable sets overlap")
        ends = {self.origin, self.destination}
        if self.mandatory & ends or ends & self.profit.keys():
            raise ValueError("origin/destination cannot be mandatory or profitable")
        if any(p < 0 for p in self.profit.values()):
            raise ValueError("profits must be nonnegative")
        if any(d < 0 for d in self.arcs.values()):
            raise ValueError("traverse times must be nonnegative")

    @property
    def profitable(self) -> frozenset[int]:
        return frozenset(self.profit)

    @property
    def interior(self) -> tuple[int, ...]:
        ends = (self.origin, self.destination)
        return tuple(v for v in self.vertices if v not in ends)

    @cached_property
    def dmat(self) -> list[list[float]]:
        """Dense traverse-time table; ``inf`` where no arc exists."""
        d = [[math.inf] * self.n for _ in range(self.n)]
        for (i, j), t in self.arcs.items():
            d[i][j] = t
        return d

    @cached_property
    def successors(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for i, j in sorted(self.arcs):
            out[i].append(j)
        return out

    @cached_property
    def predecessors(self) -> dict[int, list[int]]:
        inc: dict[int, list[int]] = {v: [] for v in self.vertices}
        for i, j in sorted(self.arcs):
            inc[j].append(i)
        return inc

    def has_arc(self, i: int, j: int) -> bool:
        return (i, j) in self.arcs


@dataclass
class Route:
    """One vehicle itinerary from origin to destination.

    A route holding only ``[s, t]`` stands for an unused vehicle; its
    duration is 0 and it is never reported.
    """

    vertices: list[int]
    duration: float = 0.0
    profit: int = 0

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) <= 2

    def copy(self) -> Route:
        return Route(list(self.vertices), self.duration, self.profit)


@dataclass
class Solution:
    routes: list[Route] = field(default_factory=list)

    @classmethod
    def from_routes(cls, instance: Instance, routes: Iterable[Sequence[int]]) -> Solution:
        built = []
        for seq in routes:
            seq = list(seq)
            if len(seq) <= 2:
                continue
            built.append(Route(seq, route_time(instance, seq), route_profit(instance, seq)))
        return cls(built)

    @property
    def visited(self) -> set[int]:
        out: set[int] = set()
        for r in self.routes:
            out.update(r.vertices)
        return out

    @property
    def profit_sum(self) -> int:
        return sum(r.profit for r in self.routes)

    @property
    def total_time(self) -> float:
        return sum(r.duration for r in self.routes)

    def nonempty_routes(self) -> list[Route]:
        return [r for r in self.routes if not r.is_empty]

    def key(self) -> tuple[tuple[int, ...], ...]:
        """Order-free identity: the multiset of nonempty vertex sequences."""
        return tuple(sorted(tuple(r.vertices) for r in self.routes if not r.is_empty))

    def copy(self) -> Solution:
        return Solution([r.copy() for r in self.routes])

    def as_lists(self) -> list[list[int]]:
        return [list(r.vertices) for r in self.nonempty_routes()]


@dataclass
class Violation:
    kind: str
    message: str
    route: int | None = None


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self) -> str:
        if self.feasible:
            return "feasible"
        lines = ["infeasible:"]
        for v in self.violations:
            where = f" (route {v.route})" if v.route is not None else ""
            lines.append(f"  [{v.kind}]{where} {v.message}")
        return "\n".join(lines)


# ---------------------------------------------------------------- ingestion


def _header_value(tokens: list[str], key: str, lineno: int, cast):
    if len(tokens) != 2 or tokens[0].lower() != key:
        raise ParseError(f"expected '{key} <value>' header", lineno)
    try:
        return cast(tokens[1])
    except ValueError:
        raise ParseError(f"non-numeric value for '{key}'", lineno) from None


def parse_instance(text: str, format: str = "stop", name: str = "instance") -> Instance:
    """Parse a Chao-style TOP file, or its STOP extension with ``M`` markers.

    The first point is the origin and the last one the destination. The
    returned instance is the complete Euclidean digraph over the points.
    """
    if format not in ("top", "stop"):
        raise ValueError(f"unknown format {format!r}")
    lines = [
        (no, raw.split())
        for no, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.lstrip().startswith("#")
    ]
    if len(lines) < 3:
        raise ParseError("missing header (expected n, m and tmax lines)")
    n = _header_value(lines[0][1], "n", lines[0][0], int)
    m = _header_value(lines[1][1], "m", lines[1][0], int)
    tmax = _header_value(lines[2][1], "tmax", lines[2][0], float)
    if m < 1:
        raise ParseError("fleet size must be positive", lines[1][0])
    if tmax < 0:
        raise ParseError("tmax must be nonnegative", lines[2][0])
    body = lines[3:]
    if n < 2:
        raise ParseError("an instance needs at least 2 points", lines[0][0])
    if len(body) != n:
        raise ParseError(f"header announces {n} points, found {len(body)}",
                         body[-1][0] if body else lines[2][0])

    coords: list[tuple[float, float]] = []
    mandatory: set[int] = set()
    profit: dict[int, int] = {}
    for idx, (no, tokens) in enumerate(body):
        marked = False
        if len(tokens) == 4 and format == "stop":
            if tokens[3] != "M":
                raise ParseError(f"unexpected token {tokens[3]!r}", no)
            marked = True
        elif len(tokens) != 3:
            raise ParseError("expected 'x y score'" + (" [M]" if format == "stop" else ""), no)
        try:
            x, y, score = (float(tok) for tok in tokens[:3])
        except ValueError:
            raise ParseError("non-numeric point field", no) from None
        if not all(math.isfinite(v) for v in (x, y, score)):
            raise ParseError("non-finite point field", no)
        if score < 0 or score != int(score):
            raise ParseError("score must be a nonnegative integer", no)
        coords.append((x, y))
        if idx == 0 or idx == n - 1:
            if marked:
                raise ParseError(
                    "mandatory marker on " + ("origin" if idx == 0 else "destination"), no)
            continue
        if marked:
            mandatory.add(idx)
        else:
            profit[idx] = int(score)

    inst = Instance(name=name, n=n, origin=0, destination=n - 1,
                    mandatory=frozenset(mandatory), profit=profit, arcs={},
                    fleet_size=m, time_limit=tmax, coords=coords)
    return build_graph(inst)


def build_graph(instance: Instance) -> Instance:
    """Complete digraph with Euclidean traverse times in both directions."""
    if instance.coords is None:
        raise ValueError("instance has no coordinates")
    c = instance.coords
    arcs = {}
    for i in instance.vertices:
        for j in instance.vertices:
            if i != j:
                arcs[(i, j)] = math.hypot(c[i][0] - c[j][0], c[i][1] - c[j][1])
    return replace(instance, arcs=arcs, r=None)


def shortest_times(instance: Instance) -> RMatrix:
    """Floyd-Warshall over the instance's arcs."""
    n = instance.n
    r = np.full((n, n), np.inf)
    np.fill_diagonal(r, 0.0)
    for (i, j), d in instance.arcs.items():
        if d < r[i, j]:
            r[i, j] = d
    for k in instance.vertices:
        np.minimum(r, r[:, k, None] + r[None, k, :], out=r)
    return RMatrix(r)


def preprocess(instance: Instance, r: RMatrix | None = None) -> Instance:
    """Drop vertices and arcs that no route within the time limit can use.

    Also drops arcs entering the origin or leaving the destination. Pruning
    is repeated until a fixed point, so a second call changes nothing. The
    returned instance carries the R matrix of the pruned graph.
    """
    s, t = instance.origin, instance.destination
    if r is None:
        r = shortest_times(instance)
    limit = instance.time_limit + TIME_TOL
    current = instance
    while True:
        R = r.values
        alive = [v for v in current.vertices
                 if v in (s, t) or R[s, v] + R[v, t] <= limit]
        dropped = set(current.vertices) - set(alive)
        lost = dropped & current.mandatory
        if lost:
            raise InfeasibleInstanceError(
                f"provably infeasible instance: mandatory vertices {sorted(lost)} "
                "cannot be visited within the time limit", sorted(lost))
        alive_set = set(alive)
        arcs = {
            (i, j): d for (i, j), d in current.arcs.items()
            if i in alive_set and j in alive_set and j != s and i != t
            and R[s, i] + d + R[j, t] <= limit
        }
        if not dropped and len(arcs) == len(current.arcs):
            break
        current = replace(
            current, vertices=tuple(alive), arcs=arcs, r=None,
            profit={v: p for v, p in current.profit.items() if v in alive_set})
        r = shortest_times(current)
    return replace(current, r=r)


# ---------------------------------------------------------- route arithmetic


def route_time(instance: Instance, route: Sequence[int]) -> float:
    if len(route) <= 2:
        return 0.0
    total = 0.0
    arcs = instance.arcs
    for a, b in zip(route, route[1:]):
        try:
            total += arcs[(a, b)]
        except KeyError:
            raise StructuralError(f"no arc {a}->{b}") from None
    return total


def route_profit(instance: Instance, route: Sequence[int]) -> int:
    return sum(instance.profit.get(v, 0) for v in route)


def validate_solution(instance: Instance, solution: Solution | Sequence[Sequence[int]]
                      ) -> ValidationReport:
    """Check every feasibility clause and report each violation found."""
    if isinstance(solution, Solution):
        routes = [list(r.vertices) for r in solution.routes]
    else:
        routes = [list(r) for r in solution]
    s, t = instance.origin, instance.destination
    known = set(instance.vertices)
    report = ValidationReport()
    add = report.violations.append

    used = [r for r in routes if not (len(r) == 2 and r[0] == s and r[1] == t)]
    if len(used) > instance.fleet_size:
        add(Violation("route-count", f"{len(used)} routes for a fleet of {instance.fleet_size}"))

    seen: dict[int, int] = {}
    for k, route in enumerate(routes):
        if len(route) < 2 or route[0] != s or route[-1] != t:
            add(Violation("bad-endpoints", f"route must run from {s} to {t}", k))
            continue
        unknown = [v for v in route if v not in known]
        if unknown:
            add(Violation("unknown-vertex", f"vertices {unknown} are not in the instance", k))
            continue
        interior = route[1:-1]
        if s in interior or t in interior:
            add(Violation("bad-endpoints", "origin/destination inside the route", k))
        if len(route) == 2:
            continue
        missing = [(a, b) for a, b in zip(route, route[1:]) if not instance.has_arc(a, b)]
        for a, b in missing:
            add(Violation("nonexistent-arc", f"no arc {a}->{b}", k))
        if not missing:
            duration = route_time(instance, route)
            if duration > instance.time_limit + TIME_TOL:
                add(Violation("time-limit",
                              f"duration {duration:.6f} exceeds {instance.time_limit}", k))
        for v in interior:
            if v in seen:
                where = "twice in the route" if seen[v] == k else f"also in route {seen[v]}"
                add(Violation("duplicate-visit", f"vertex {v} visited {where}", k))
            else:
                seen[v] = k

    missing_s = sorted(instance.mandatory - seen.keys())
    if missing_s:
        add(Violation("missing-mandatory", f"mandatory vertices {missing_s} not visited"))
    return report
