"""
Exact min-cost flow engine: transportation plans and lower-bounded assignment.
"""

from .min_cost_flow import MinCostFlow
from .transport import Assignment, TransportPlan, TransportProblem, assign_with_lower_bounds, solve_transport

__all__ = [
    "MinCostFlow",
    "TransportProblem",
    "TransportPlan",
    "Assignment",
    "solve_transport",
    "assign_with_lower_bounds",
]
