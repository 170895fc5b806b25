"""
Constant-factor approximation for lower-bounded facility location.

The solver reduces an LBFL instance through a bi-criteria stage, client and
facility aggregation, a penalty variant and a transportation problem down to
capacitated facility location, solves that by local search and lifts the
result back, checking an exact cost certificate at every step.
"""

from .config import SolverConfig
from .core import LbflInstance, LbflSolution, check_solution, cost_of, load_instance
from .errors import Infeasible, LbflError
from .pipeline import AlphaLedger, CertificateReport, alpha_ledger, pipeline_solve, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "SolverConfig",
    "LbflInstance",
    "LbflSolution",
    "check_solution",
    "cost_of",
    "load_instance",
    "Infeasible",
    "LbflError",
    "AlphaLedger",
    "CertificateReport",
    "alpha_ledger",
    "pipeline_solve",
    "run_pipeline",
]
