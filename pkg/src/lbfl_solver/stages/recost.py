"""
Pricing a final solution under d², d¹ and d.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from ..core.instance import CostBreakdown, LbflInstance, LbflSolution, cost_of
from ..errors import InvalidSolutionError
from .aggregation import StageI1, StageI2
from .certificates import Certificate, certify

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Recosting:
    i2: CostBreakdown
    i1: CostBreakdown
    original: CostBreakdown
    certificates: Tuple[Certificate, ...]


def recost_down(instance: LbflInstance, i1: StageI1, i2: StageI2, solution: LbflSolution,
                enforce: bool = True) -> Recosting:
    """Evaluate ``solution`` in I², I¹ and I and certify

    cost_{I¹} ≤ (3/2)·cost_{I²}  and  cost_I ≤ cost_{I¹} + f(S°) + ccost_I(σ°).

    Raises:
        InvalidSolutionError: the solution violates a lower bound.
        CertificateViolation: an inequality fails and ``enforce`` is set.
    """
    cost_2 = cost_of(i2.base, solution)
    if cost_2.shortfalls:
        raise InvalidSolutionError(f"solution violates {len(cost_2.shortfalls)} lower bound(s)")
    cost_1 = cost_of(i1.base, solution)
    cost_0 = cost_of(instance, solution)

    covered = i1.covered
    stage1_cost = sum((Fraction(instance.cost(v)) for v in covered.s_circ), Fraction(0)) + \
        sum(instance.fc(v, j) for j, v in enumerate(covered.sigma_circ))
    certificates = (
        certify("I2-to-I1 recost", cost_1.total, cost_2.total, Fraction(3, 2), enforce=enforce),
        certify("I1-to-I recost", cost_0.total, cost_1.total, 1, stage1_cost, enforce=enforce),
    )
    logger.info(f"Recost: I²={cost_2.total}, I¹={cost_1.total}, I={cost_0.total}")
    return Recosting(cost_2, cost_1, cost_0, certificates)


__all__ = ["Recosting", "recost_down"]
