"""
Exception hierarchy and typed infeasibility results for the LBFL solver.

Operations that can legitimately find no solution return an ``Infeasible``
value; everything else signals problems by raising an ``LbflError`` subclass.
Each exception carries the CLI exit code it maps to.
"""

from dataclasses import dataclass
from typing import Any, Optional


class LbflError(Exception):
    """Base class for all solver errors."""

    exit_code: int = 1


class MalformedInputError(LbflError):
    """Input does not match the instance/solution model."""

    exit_code = 4

    def __init__(self, message: str, context: Optional[str] = None):
        self.context = context
        super().__init__(f"{message} ({context})" if context else message)


class MetricViolationError(MalformedInputError):
    """Distance matrix is not a (pseudo)metric."""

    def __init__(self, violations: list):
        self.violations = violations
        first = violations[0] if violations else None
        super().__init__(f"distance matrix is not a metric: {first}", context=f"{len(violations)} violation(s)")


class InfeasibleInstanceError(LbflError):
    """No feasible LBFL solution exists, or a stage could not build one."""

    exit_code = 2

    def __init__(self, message: str, stage: str = "input"):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class InvalidSolutionError(LbflError):
    """A solution handed to a costing or lifting routine breaks its contract."""

    exit_code = 4


class DegenerateInstanceError(LbflError):
    """Stage 1 opened fewer than two locations; facility aggregation is undefined."""

    exit_code = 2


class SizeGuardError(LbflError):
    """Instance is too large for a brute-force oracle."""

    exit_code = 4


class InternalConsistencyError(LbflError):
    """Two pieces of derived data disagree (for example a plan and its choice)."""

    exit_code = 3


class CertificateViolation(LbflError):
    """A per-stage cost inequality failed. By construction this is a bug."""

    exit_code = 3

    def __init__(self, name: str, lhs: Any, rhs: Any, detail: str = ""):
        self.name = name
        self.lhs = lhs
        self.rhs = rhs
        message = f"certificate '{name}' failed: {lhs} > {rhs}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


@dataclass(frozen=True)
class Infeasible:
    """Typed 'no solution' result."""

    reason: str

    def __bool__(self) -> bool:
        return False


__all__ = [
    "LbflError",
    "MalformedInputError",
    "MetricViolationError",
    "InfeasibleInstanceError",
    "InvalidSolutionError",
    "DegenerateInstanceError",
    "SizeGuardError",
    "InternalConsistencyError",
    "CertificateViolation",
    "Infeasible",
]
