"""
Core LBFL model: instances, solutions, metric validation, costing,
instance generation and the JSON file formats.
"""

from .instance import (
    Number,
    Facility,
    MetricViolation,
    LbflInstance,
    LbflSolution,
    Shortfall,
    CostBreakdown,
    CheckVerdict,
    validate_metric,
    cost_of,
    check_solution,
    disjoint_union,
    union_solution,
    format_exact,
    unscaled,
)
from .generator import GeneratorProfile, PROFILES, get_profile, generate_instance, generate_suite
from .io import (
    SolutionFile,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
    solution_to_dict,
    solution_from_dict,
    load_solution,
    save_solution,
)

__all__ = [
    "Number",
    "Facility",
    "MetricViolation",
    "LbflInstance",
    "LbflSolution",
    "Shortfall",
    "CostBreakdown",
    "CheckVerdict",
    "validate_metric",
    "cost_of",
    "check_solution",
    "disjoint_union",
    "union_solution",
    "format_exact",
    "unscaled",
    "GeneratorProfile",
    "PROFILES",
    "get_profile",
    "generate_instance",
    "generate_suite",
    "SolutionFile",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "save_instance",
    "solution_to_dict",
    "solution_from_dict",
    "load_solution",
    "save_solution",
]
