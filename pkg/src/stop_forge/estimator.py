"""Estimator-style front end over the solver pipeline.

``fit`` takes an instance (object or file path) where a learner would take
data; there is nothing to predict, so the fitted attributes carry the result.
"""

from __future__ import annotations

from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .instance import Instance, parse_instance
from .lns import LnsConfig
from .pump import PumpConfig
from .solver import ALGOS, run


def check_instance(X) -> Instance:
    """Accept an ``Instance``, a path to an instance file, or raw file text."""
    if isinstance(X, Instance):
        return X
    if isinstance(X, Path) or (isinstance(X, str) and "\n" not in X):
        p = Path(X)
        return parse_instance(p.read_text(), format="stop", name=p.stem)
    if isinstance(X, str):
        return parse_instance(X, format="stop")
    raise TypeError(f"expected an Instance, a path or instance text, got {type(X).__name__}")


class StopSolver(BaseEstimator):
    """Cutting planes, (objective) feasibility pump and LNS with path relinking.

    Parameters mirror the algorithm knobs; ``algo`` is one of
    ``fp-raw``, ``fp-cuts``, ``ofp-raw``, ``ofp-cuts``.
    """

    def __init__(self, algo="ofp-cuts", lns_iters=5000, seed=0, max_pumps=2000,
                 flip_basis=10, max_pool_size=20, stalling_limit=100,
                 removal_percentage=0.75, similarity_limit=0.9, stop_on_stall=False,
                 backend=None):
        self.algo = algo
        self.lns_iters = lns_iters
        self.seed = seed
        self.max_pumps = max_pumps
        self.flip_basis = flip_basis
        self.max_pool_size = max_pool_size
        self.stalling_limit = stalling_limit
        self.removal_percentage = removal_percentage
        self.similarity_limit = similarity_limit
        self.stop_on_stall = stop_on_stall
        self.backend = backend

    def _validate_params(self):
        if self.algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}, got {self.algo!r}")
        pump_cfg = PumpConfig(max_pumps=self.max_pumps, flip_basis=self.flip_basis)
        lns_cfg = LnsConfig(max_iter=self.lns_iters, max_pool_size=self.max_pool_size,
                            stalling_limit=self.stalling_limit,
                            removal_percentage=self.removal_percentage,
                            similarity_limit=self.similarity_limit,
                            stop_on_stall=self.stop_on_stall)
        return pump_cfg, lns_cfg

    def fit(self, X, y=None):
        instance = check_instance(X)
        pump_cfg, lns_cfg = self._validate_params()
        res = run(instance, self.algo, lns_iters=self.lns_iters, seed=self.seed,
                  pump_cfg=pump_cfg, lns_cfg=lns_cfg, backend=self.backend)
        prep = res.prepared
        self.instance_ = instance
        self.status_ = res.status
        self.solution_ = res.solution
        self.profit_ = res.profit
        self.pump_outcome_ = res.pump
        self.lns_result_ = res.lns
        self.cut_trace_ = list(prep.cuts.trace) if prep.cuts else []
        self.lp_bound_ = prep.lp_bound
        self.dual_bound_ = prep.dual_bound
        self.times_ = res.times
        return self

    def _check_fitted(self):
        if not hasattr(self, "status_"):
            raise NotFittedError("call fit before using this StopSolver")

    def predict(self, X=None):
        """Routes of the fitted solution (empty when none was found)."""
        self._check_fitted()
        return self.solution_.as_lists() if self.solution_ is not None else []

    def score(self, X=None, y=None) -> float:
        """Collected profit; 0 when no feasible solution was found."""
        self._check_fitted()
        return float(self.profit_ or 0)
