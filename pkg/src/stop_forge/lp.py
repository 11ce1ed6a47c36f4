"""Commodity-flow formulation of the STOP and its LP relaxation.

Variables are laid out as ``[x (arcs) | y (vertices) | f (arcs) | phi]``.
Cuts and other rows address variables symbolically, as ``("x", (i, j))``
or ``("y", i)``, so a cut stays meaningful across model copies.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .instance import Instance, RMatrix, Solution, shortest_times

INF = math.inf
INTEGRALITY_TOL = 1e-6
FEAS_TOL = 1e-6


class LPInfeasibleError(Exception):
    """The LP relaxation has no feasible point."""


class ModelContractError(RuntimeError):
    """A model was built from an instance that violates the preprocessing contract."""


@dataclass
class Row:
    """``lo <= sum(coef * var) <= hi`` over symbolic variable keys."""

    coeffs: dict
    lo: float
    hi: float
    tag: str = ""


class LinearModel:
    """Formulation data plus appended cut rows. The base rows are never removed."""

    def __init__(self, instance: Instance, r: RMatrix):
        self.instance = instance
        self.r = r
        self.arcs: list[tuple[int, int]] = sorted(instance.arcs)
        self.vertices: list[int] = list(instance.vertices)
        na, nv = len(self.arcs), len(self.vertices)
        self.arc_pos = {a: k for k, a in enumerate(self.arcs)}
        self.vertex_pos = {v: k for k, v in enumerate(self.vertices)}
        self.n_vars = 2 * na + nv + 1
        self.x_off, self.y_off, self.f_off, self.phi_idx = 0, na, na + nv, 2 * na + nv
        self.lb = np.zeros(self.n_vars)
        self.ub = np.ones(self.n_vars)
        self.ub[self.f_off:self.f_off + na] = INF
        self.ub[self.phi_idx] = instance.fleet_size
        self.objective = np.zeros(self.n_vars)  # maximised
        self.rows: list[Row] = []
        self.n_base_rows = 0
        self.cuts: list = []
        self._cut_keys: set = set()

    # ------------------------------------------------------------ indexing
    def index(self, key) -> int:
        kind, ref = key
        if kind == "x":
            return self.x_off + self.arc_pos[ref]
        if kind == "y":
            return self.y_off + self.vertex_pos[ref]
        if kind == "f":
            return self.f_off + self.arc_pos[ref]
        if kind == "phi":
            return self.phi_idx
        raise KeyError(key)

    def x_slice(self) -> slice:
        return slice(self.x_off, self.x_off + len(self.arcs))

    def y_slice(self) -> slice:
        return slice(self.y_off, self.y_off + len(self.vertices))

    def f_slice(self) -> slice:
        return slice(self.f_off, self.f_off + len(self.arcs))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    # ------------------------------------------------------------ rows
    def add_row(self, coeffs: Mapping, sense: str, rhs: float, tag: str = "") -> None:
        if sense == "=":
            lo, hi = rhs, rhs
        elif sense == "<=":
            lo, hi = -INF, rhs
        elif sense == ">=":
            lo, hi = rhs, INF
        else:
            raise ValueError(f"unknown sense {sense!r}")
        for key in coeffs:
            self.index(key)  # raises on undeclared variables
        self.rows.append(Row(dict(coeffs), lo, hi, tag))

    def add_cut(self, cut) -> bool:
        """Append a cut unless an identical one is already present."""
        key = cut.key()
        if key in self._cut_keys:
            return False
        self._cut_keys.add(key)
        self.cuts.append(cut)
        self.add_row(cut.coeffs, cut.sense, cut.rhs, tag=cut.kind)
        return True

    def has_cut(self, cut) -> bool:
        return cut.key() in self._cut_keys

    def copy(self) -> LinearModel:
        other = LinearModel.__new__(LinearModel)
        other.__dict__.update(self.__dict__)
        other.lb, other.ub = self.lb.copy(), self.ub.copy()
        other.objective = self.objective.copy()
        other.rows = list(self.rows)
        other.cuts = list(self.cuts)
        other._cut_keys = set(self._cut_keys)
        return other

    def matrix(self, start: int = 0):
        """CSR matrix and row bounds for rows ``start:``."""
        from scipy.sparse import csr_matrix

        indptr, indices, data, lo, hi = [0], [], [], [], []
        for row in self.rows[start:]:
            for key, c in row.coeffs.items():
                if c != 0:
                    indices.append(self.index(key))
                    data.append(float(c))
            indptr.append(len(indices))
            lo.append(row.lo)
            hi.append(row.hi)
        mat = csr_matrix((np.array(data, dtype=float), np.array(indices, dtype=np.int64),
                          np.array(indptr, dtype=np.int64)),
                         shape=(len(self.rows) - start, self.n_vars))
        return mat, np.array(lo, dtype=float), np.array(hi, dtype=float)


@dataclass
class FractionalPoint:
    arcs: Sequence[tuple[int, int]]
    vertices: Sequence[int]
    x: np.ndarray
    y: np.ndarray
    f: np.ndarray
    phi: float
    objective: float
    values: np.ndarray = field(repr=False, default=None)

    @cached_property
    def xbar(self) -> dict[tuple[int, int], float]:
        return dict(zip(self.arcs, self.x.tolist()))

    @cached_property
    def ybar(self) -> dict[int, float]:
        return dict(zip(self.vertices, self.y.tolist()))

    def is_integral(self, tol: float = INTEGRALITY_TOL) -> bool:
        return bool(np.all(np.minimum(np.abs(self.x), np.abs(1 - self.x)) <= tol))


def build_model(instance: Instance, r: RMatrix | None = None) -> LinearModel:
    """Relaxation of the commodity-flow formulation for a preprocessed instance."""
    if r is None:
        r = instance.r if instance.r is not None else shortest_times(instance)
    R = r.values
    s, t, T, m = instance.origin, instance.destination, instance.time_limit, instance.fleet_size
    model = LinearModel(instance, r)
    out_arcs: dict[int, list] = {v: [] for v in model.vertices}
    in_arcs: dict[int, list] = {v: [] for v in model.vertices}
    for a in model.arcs:
        out_arcs[a[0]].append(a)
        in_arcs[a[1]].append(a)

    for v, p in instance.profit.items():
        if v in model.vertex_pos:
            model.objective[model.index(("y", v))] = p
    for v in set(instance.mandatory) | {s, t}:
        if v in model.vertex_pos:
            k = model.index(("y", v))
            model.lb[k] = model.ub[k] = 1.0
    # arcs into s / out of t are absent after preprocessing; fix them otherwise
    dead = set(in_arcs[s] + out_arcs[t])
    for a in dead:
        model.ub[model.index(("x", a))] = 0.0
        model.ub[model.index(("f", a))] = 0.0

    interior = [v for v in model.vertices if v not in (s, t)]
    for i in interior:
        row = {("x", a): 1.0 for a in out_arcs[i]}
        row[("y", i)] = -1.0
        model.add_row(row, "=", 0.0, "degree")
    row = {("x", a): 1.0 for a in out_arcs[s]}
    row[("phi", None)] = 1.0
    model.add_row(row, "=", m, "fleet-out")
    row = {("x", a): 1.0 for a in in_arcs[t]}
    row[("phi", None)] = 1.0
    model.add_row(row, "=", m, "fleet-in")
    for i in interior:
        row = {("x", a): 1.0 for a in out_arcs[i]}
        for a in in_arcs[i]:
            row[("x", a)] = row.get(("x", a), 0.0) - 1.0
        model.add_row(row, "=", 0.0, "conservation")
    for a in out_arcs[s]:
        model.add_row({("f", a): 1.0, ("x", a): -(T - instance.arcs[a])}, "=", 0.0, "flow-start")
    for i in interior:
        row = {("f", a): 1.0 for a in in_arcs[i]}
        for a in out_arcs[i]:
            row[("f", a)] = -1.0
            row[("x", a)] = -instance.arcs[a]
        model.add_row(row, "=", 0.0, "flow-balance")
    for (i, j) in model.arcs:
        a = (i, j)
        if a in dead:
            continue
        if i != s:
            if not math.isfinite(R[s, i]):
                raise ModelContractError(f"arc {a} leaves a vertex unreachable from the origin")
            model.add_row({("f", a): 1.0, ("x", a): -(T - R[s, i] - instance.arcs[a])},
                          "<=", 0.0, "flow-cap")
        if not math.isfinite(R[j, t]):
            raise ModelContractError(f"arc {a} enters a vertex that cannot reach the destination")
        model.add_row({("f", a): 1.0, ("x", a): -R[j, t]}, ">=", 0.0, "flow-floor")
    model.n_base_rows = len(model.rows)
    return model


# ---------------------------------------------------------------- backends


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible"
    values: np.ndarray | None
    objective: float  # of the minimisation actually solved


class HighsSession:
    """Incremental HiGHS workspace: rows appended and costs changed in place,
    re-solves start from the previous basis."""

    name = "highs"

    def __init__(self, model: LinearModel):
        import highspy

        self._hs = highspy
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("threads", 1)
        h.setOptionValue("random_seed", 0)
        h.setOptionValue("solver", "simplex")
        self.h = h
        self.model = model
        inf = highspy.kHighsInf
        ub = np.where(np.isinf(model.ub), inf, model.ub)
        h.addVars(model.n_vars, model.lb.astype(float), ub.astype(float))
        self.loaded = 0
        self.sync()

    def sync(self):
        model = self.model
        if self.loaded == model.n_rows:
            return
        mat, lo, hi = model.matrix(self.loaded)
        inf = self._hs.kHighsInf
        lo = np.where(np.isinf(lo), -inf, lo)
        hi = np.where(np.isinf(hi), inf, hi)
        self.h.addRows(len(lo), lo, hi, mat.nnz, mat.indptr[:-1].astype(np.int32),
                       mat.indices.astype(np.int32), mat.data)
        self.loaded = model.n_rows

    def solve(self, cost: np.ndarray, offset: float = 0.0) -> LPResult:
        self.sync()
        idx = np.arange(self.model.n_vars, dtype=np.int32)
        self.h.changeColsCost(self.model.n_vars, idx, cost.astype(float))
        self.h.run()
        status = self.h.getModelStatus()
        ms = self._hs.HighsModelStatus
        if status == ms.kInfeasible:
            return LPResult("infeasible", None, INF)
        if status != ms.kOptimal:
            # retry from scratch once; stale bases occasionally stall
            self.h.clearSolver()
            self.h.run()
            status = self.h.getModelStatus()
            if status == ms.kInfeasible:
                return LPResult("infeasible", None, INF)
            if status != ms.kOptimal:
                raise RuntimeError(f"LP solver returned {self.h.modelStatusToString(status)}")
        vals = np.array(self.h.getSolution().col_value)
        return LPResult("optimal", vals, float(cost @ vals) + offset)


class ScipySession:
    """Stateless scipy ``linprog`` backend; every solve starts from scratch."""

    def __init__(self, model: LinearModel, method: str = "highs-ds"):
        self.model = model
        self.method = method
        self.name = "scipy-" + method
        self._cache = None

    def solve(self, cost: np.ndarray, offset: float = 0.0) -> LPResult:
        from scipy.optimize import linprog

        model = self.model
        if self._cache is None or self._cache[0] != model.n_rows:
            mat, lo, hi = model.matrix()
            eq = lo == hi
            ub_lo = ~eq & np.isfinite(lo)
            ub_hi = ~eq & np.isfinite(hi)
            from scipy.sparse import vstack

            a_ub = vstack([mat[ub_hi], -mat[ub_lo]]).tocsr()
            b_ub = np.concatenate([hi[ub_hi], -lo[ub_lo]])
            self._cache = (model.n_rows, mat[eq].tocsr(), lo[eq], a_ub, b_ub)
        _, a_eq, b_eq, a_ub, b_ub = self._cache
        bounds = np.column_stack([model.lb, np.where(np.isinf(model.ub), np.nan, model.ub)])
        bounds = [(lo, None if np.isnan(hi) else hi) for lo, hi in bounds]
        res = linprog(cost, A_ub=a_ub if a_ub.shape[0] else None,
                      b_ub=b_ub if a_ub.shape[0] else None,
                      A_eq=a_eq if a_eq.shape[0] else None,
                      b_eq=b_eq if a_eq.shape[0] else None,
                      bounds=bounds, method=self.method)
        if res.status == 2:
            return LPResult("infeasible", None, INF)
        if res.status != 0:
            raise RuntimeError(f"LP solver failed: {res.message}")
        return LPResult("optimal", np.asarray(res.x), float(res.fun) + offset)


BACKENDS = {
    "highs": HighsSession,
    "scipy-ds": lambda model: ScipySession(model, "highs-ds"),
    "scipy-ipm": lambda model: ScipySession(model, "highs-ipm"),
}


def default_backend() -> str:
    name = os.environ.get("STOP_FORGE_LP", "highs")
    if name not in BACKENDS:
        raise ValueError(f"STOP_FORGE_LP={name!r}; choose one of {sorted(BACKENDS)}")
    return name


def open_session(model: LinearModel, backend: str | None = None):
    return BACKENDS[backend or default_backend()](model)


def to_point(model: LinearModel, values: np.ndarray, objective: float) -> FractionalPoint:
    # clip solver noise into the box so downstream rounding sees clean values
    values = np.clip(values, model.lb, model.ub)
    return FractionalPoint(
        arcs=model.arcs, vertices=model.vertices,
        x=values[model.x_slice()].copy(), y=values[model.y_slice()].copy(),
        f=values[model.f_slice()].copy(), phi=float(values[model.phi_idx]),
        objective=objective, values=values)


def solve_lp(model: LinearModel, session=None) -> FractionalPoint:
    """Maximise the model objective. Raises LPInfeasibleError when empty."""
    session = session or open_session(model)
    res = session.solve(-model.objective)
    if res.status == "infeasible":
        raise LPInfeasibleError("LP relaxation is infeasible")
    return to_point(model, res.values, float(model.objective @ res.values))


def round_point(x: np.ndarray | Mapping) -> np.ndarray | dict:
    """Nearest integer with halves rounded up."""
    if isinstance(x, Mapping):
        return {k: int(math.floor(v + 0.5)) for k, v in x.items()}
    return np.floor(np.asarray(x, dtype=float) + 0.5)


# -------------------------------------------------------- independent checks


def row_activity(model: LinearModel, row: Row, values: np.ndarray) -> float:
    return sum(c * values[model.index(k)] for k, c in row.coeffs.items())


def check_point(model: LinearModel, values: np.ndarray, tol: float = FEAS_TOL,
                rows: Iterable[Row] | None = None) -> list[str]:
    """Replay every bound and row in plain Python; return descriptions of violations."""
    bad = []
    for k in range(model.n_vars):
        if values[k] < model.lb[k] - tol or values[k] > model.ub[k] + tol:
            bad.append(f"bound of variable {k}: {values[k]}")
    for n, row in enumerate(model.rows if rows is None else rows):
        act = row_activity(model, row, values)
        if act < row.lo - tol or act > row.hi + tol:
            bad.append(f"row {n} [{row.tag}]: {row.lo} <= {act} <= {row.hi}")
    return bad


def point_from_solution(model: LinearModel, solution: Solution | Sequence[Sequence[int]]
                        ) -> np.ndarray:
    """(x, y, f, phi) induced by an integral solution; f carries remaining time."""
    inst = model.instance
    routes = solution.as_lists() if isinstance(solution, Solution) else [
        list(r) for r in solution if len(r) > 2]
    v = np.zeros(model.n_vars)
    for node in (inst.origin, inst.destination):
        v[model.index(("y", node))] = 1.0
    for route in routes:
        clock = 0.0
        for a, b in zip(route, route[1:]):
            clock += inst.arcs[(a, b)]
            v[model.index(("x", (a, b)))] = 1.0
            v[model.index(("f", (a, b)))] = inst.time_limit - clock
        for node in route:
            v[model.index(("y", node))] = 1.0
    v[model.phi_idx] = inst.fleet_size - len(routes)
    return v
