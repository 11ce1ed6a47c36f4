"""Steiner Team Orienteering solver: cutting planes, feasibility pump, LNS."""

from .cuts import CutSelectionPolicy, build_conflicts, cutting_plane
from .estimator import StopSolver, check_instance
from .instance import (
    InfeasibleInstanceError,
    Instance,
    ParseError,
    Route,
    Solution,
    StructuralError,
    ValidationReport,
    parse_instance,
    preprocess,
    validate_solution,
)
from .lns import LnsConfig, lns_run
from .lp import build_model, solve_lp
from .pump import PumpConfig, pump
from .solver import ALGOS, prepare, run

__version__ = "0.1.0"

__all__ = [
    "ALGOS", "CutSelectionPolicy", "InfeasibleInstanceError", "Instance", "LnsConfig",
    "ParseError", "PumpConfig", "Route", "Solution", "StopSolver", "StructuralError",
    "ValidationReport", "build_conflicts", "build_model", "check_instance", "cutting_plane",
    "lns_run", "parse_instance", "preprocess", "prepare", "pump", "run", "solve_lp",
    "validate_solution",
]
