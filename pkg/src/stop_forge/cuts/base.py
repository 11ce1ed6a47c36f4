"""Cut representation shared by all separators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CCC, AVIC, LCI = "CCC", "AVIC", "LCI"
KINDS = (CCC, AVIC, LCI)


def point_value(point, key) -> float:
    kind, ref = key
    if kind == "x":
        return point.xbar.get(ref, 0.0)
    if kind == "y":
        return point.ybar.get(ref, 0.0)
    raise KeyError(key)


@dataclass
class Cut:
    """``sum(coeffs[k] * var_k) sense rhs`` with ``sense`` in {"<=", ">="}.

    ``violation`` is positive when the reference point breaks the cut.
    """

    kind: str
    coeffs: dict
    sense: str
    rhs: float
    violation: float = 0.0
    norm: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.sense not in ("<=", ">="):
            raise ValueError(f"bad sense {self.sense!r}")
        self.coeffs = {k: float(c) for k, c in self.coeffs.items() if c != 0}
        self.norm = math.sqrt(sum(c * c for c in self.coeffs.values()))

    def activity(self, values) -> float:
        """Left-hand side at ``values``: a FractionalPoint or a key -> value mapping."""
        if isinstance(values, dict):
            return sum(c * values.get(k, 0.0) for k, c in self.coeffs.items())
        return sum(c * point_value(values, k) for k, c in self.coeffs.items())

    def violation_at(self, values) -> float:
        lhs = self.activity(values)
        return lhs - self.rhs if self.sense == "<=" else self.rhs - lhs

    def evaluate(self, point) -> Cut:
        self.violation = self.violation_at(point)
        return self

    @property
    def distance(self) -> float:
        return self.violation / self.norm if self.norm > 0 else 0.0

    def leq_form(self) -> tuple[dict, float]:
        """Coefficients and rhs of the equivalent ``<=`` inequality."""
        if self.sense == "<=":
            return self.coeffs, self.rhs
        return {k: -c for k, c in self.coeffs.items()}, -self.rhs

    def key(self):
        a, b = self.leq_form()
        return (frozenset(a.items()), b)


def inner_product(c1: Cut, c2: Cut) -> float:
    """Cosine of the angle between two cuts in ``<=`` orientation."""
    a1, _ = c1.leq_form()
    a2, _ = c2.leq_form()
    if c1.norm == 0 or c2.norm == 0:
        return 0.0
    if len(a2) < len(a1):
        a1, a2 = a2, a1
    dot = sum(c * a2.get(k, 0.0) for k, c in a1.items())
    return dot / (c1.norm * c2.norm)
