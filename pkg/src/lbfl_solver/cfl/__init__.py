"""
Capacitated facility location: instance model, exact pricing and local search.
"""

from .model import CflInstance, CflSolution, Supplier, eval_open_set
from .local_search import Move, best_move, is_locally_stable, local_search, neighbourhood

__all__ = [
    "Supplier",
    "CflInstance",
    "CflSolution",
    "eval_open_set",
    "Move",
    "neighbourhood",
    "best_move",
    "local_search",
    "is_locally_stable",
]
