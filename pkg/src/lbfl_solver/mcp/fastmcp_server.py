#!/usr/bin/env python3
"""
FastMCP server exposing the LBFL solver.
Tools take and return the JSON documents of the instance and solution file formats.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from fastmcp import FastMCP

if __package__ in (None, ""):
    # launched as a script by the client: make the package importable
    sys.path.insert(0, str(Path(__file__).resolve().parents[2]))

from lbfl_solver.config import SolverConfig, parse_rational, setup_logging
from lbfl_solver.core.generator import generate_instance as _generate
from lbfl_solver.core.generator import get_profile
from lbfl_solver.core.instance import check_solution as _check
from lbfl_solver.core.instance import format_exact
from lbfl_solver.core.io import instance_from_dict, instance_to_dict, solution_from_dict, solution_to_dict
from lbfl_solver.errors import Infeasible, LbflError
from lbfl_solver.oracle import brute_lbfl
from lbfl_solver.pipeline import alpha_ledger as _alpha_ledger
from lbfl_solver.pipeline import run_pipeline
from lbfl_solver.reporting import money, solve_result

logger = logging.getLogger("lbfl-fastmcp-server")

# Initialize FastMCP server
mcp = FastMCP(name="LbflSolverServer")


def _error(action: str, e: Exception) -> Dict[str, Any]:
    logger.error(f"Error {action}: {str(e)}")
    payload: Dict[str, Any] = {"error": str(e)}
    if isinstance(e, LbflError):
        payload["exit_code"] = e.exit_code
    return payload


@mcp.tool
def generate_instance(seed: int = 0, profile: str = "suite") -> Dict[str, Any]:
    """Generate a seeded random LBFL instance.

    Args:
        seed: Random seed
        profile: Generator profile name (tiny, suite, line, euclid, graph, tcsd, medium)

    Returns:
        Dictionary with the instance document
    """
    try:
        instance = _generate(seed, get_profile(profile))
        return {"seed": seed, "profile": profile, "instance": instance_to_dict(instance)}
    except Exception as e:
        return _error("generating instance", e)


@mcp.tool
def solve_instance(instance: Dict[str, Any], beta: str = "2/3", cfl_eps: str = "1/100",
                   oracle: bool = False) -> Dict[str, Any]:
    """Solve an LBFL instance with the reduction pipeline.

    Args:
        instance: Instance document (facilities, clients, dist or points)
        beta: Coverage parameter strictly between 1/2 and 1
        cfl_eps: Local search improvement threshold
        oracle: Also compute the exact optimum (small instances only)

    Returns:
        Solution, cost and certificate report
    """
    try:
        inst = instance_from_dict(instance)
        config = SolverConfig.from_env(beta=parse_rational(beta, "beta"),
                                       cfl_eps=parse_rational(cfl_eps, "cfl_eps"))
        run = run_pipeline(inst, config, oracle=oracle)
        return solve_result(inst, run.solution, run.report)
    except Exception as e:
        return _error("solving instance", e)


@mcp.tool
def check_solution(instance: Dict[str, Any], solution: Dict[str, Any]) -> Dict[str, Any]:
    """Validate a solution against an instance.

    Args:
        instance: Instance document
        solution: Solution document {"open": [...], "assign": {client: facility}}

    Returns:
        Feasibility verdict, issues and cost breakdown
    """
    try:
        inst = instance_from_dict(instance)
        record = solution_from_dict(solution)
        verdict = _check(inst, record.open, record.assign)
        result: Dict[str, Any] = {"feasible": verdict.feasible, "issues": list(verdict.issues)}
        if verdict.cost is not None:
            result["cost"] = money(verdict.cost.total, inst.scale)
        return result
    except Exception as e:
        return _error("checking solution", e)


@mcp.tool
def oracle_solve(instance: Dict[str, Any]) -> Dict[str, Any]:
    """Solve a small LBFL instance exactly by enumeration.

    Args:
        instance: Instance document with at most 12 facilities

    Returns:
        Optimal solution and cost, or feasible=False with a reason
    """
    try:
        inst = instance_from_dict(instance)
        config = SolverConfig.from_env()
        result = brute_lbfl(inst, config.oracle_max_facilities, config.oracle_max_clients)
        if isinstance(result, Infeasible):
            return {"feasible": False, "reason": result.reason}
        solution, cost = result
        return {"feasible": True, "solution": solution_to_dict(inst, solution), "cost": money(cost, inst.scale)}
    except Exception as e:
        return _error("running oracle", e)


@mcp.tool
def alpha_ledger(beta: str = "2/3", alpha_cfl: int = 9) -> Dict[str, Any]:
    """Approximation factors of the reduction chain.

    Args:
        beta: Coverage parameter
        alpha_cfl: Approximation ratio of the CFL subroutine

    Returns:
        Exact factors alpha4, alpha3, alpha2, alpha1 and alpha
    """
    try:
        ledger = _alpha_ledger(parse_rational(beta, "beta"), alpha_cfl)
        return {k: format_exact(v) for k, v in ledger.as_dict().items()}
    except Exception as e:
        return _error("computing ledger", e)


def main(log_level: Optional[str] = None):
    """Run the FastMCP server."""
    setup_logging(log_level)
    try:
        logger.info("Starting FastMCP LBFL solver server")
        mcp.run()
    except Exception as e:
        logger.error(f"Failed to start server: {e}")
        raise


if __name__ == "__main__":
    main()
