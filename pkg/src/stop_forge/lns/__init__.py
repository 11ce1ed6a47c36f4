"""Large neighbourhood search with path relinking."""

from .core import Ctx, better
from .engine import IterRecord, LnsConfig, LnsResult, lns_run
from .local_search import inter_intra, local_search, replacements
from .moves import destroy, greedy_insert, inter_route_exchange, removal_attempts, unvisited_replace
from .perturbation import shift_perturbation
from .pool import Pool, pool_try_add
from .relinking import path_between, path_relinking, similarity
from .three_opt import best_move, three_opt

__all__ = [
    "Ctx", "IterRecord", "LnsConfig", "LnsResult", "Pool", "best_move", "better", "destroy",
    "greedy_insert", "inter_intra", "inter_route_exchange", "lns_run", "local_search",
    "path_between", "path_relinking", "pool_try_add", "removal_attempts", "replacements",
    "shift_perturbation", "similarity", "three_opt", "unvisited_replace",
]
