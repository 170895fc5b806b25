#!/usr/bin/env python3
"""
FastMCP module for the LBFL solver.

The server exposes generation, solving, checking, the exact oracle and the
factor ledger as tools; the client wraps them for synchronous callers.
"""

from .fastmcp_client import (
    LbflFastMCPClient,
    get_fastmcp_client,
    solve_instance_sync,
    check_solution_sync,
    alpha_ledger_sync,
)

__all__ = [
    'LbflFastMCPClient',
    'get_fastmcp_client',
    'solve_instance_sync',
    'check_solution_sync',
    'alpha_ledger_sync',
]
