"""
From canonical R_v lists to a CFL instance (I⁵) and back.

At v with canonical list (h_1 = 0, y_1) < … < (h_L, y_L): y_1 ≤ 0 becomes −y_1
demand units, y_1 > 0 a free supplier of capacity y_1; every further level ℓ
becomes a supplier of cost h_ℓ and capacity y_ℓ − y_{ℓ−1}.
"""

import logging
from typing import Dict, FrozenSet, Mapping, Tuple

from ..cfl.model import CflInstance, CflSolution, Supplier
from ..errors import InvalidSolutionError
from .tcsd import CanonicalPair, TcsdInstance

logger = logging.getLogger(__name__)


def build_cfl(canon: Mapping[int, Tuple[CanonicalPair, ...]], t: TcsdInstance,
              labels: Mapping[int, str] = None) -> CflInstance:
    """Build I⁵ over the locations and metric of ``t``.

    Args:
        canon: canonical lists per location.
        t: the TCSD instance providing locations and d².
        labels: optional display name per location used in supplier ids.
    """
    demand: Dict[int, int] = {}
    suppliers = []
    for v in t.locations:
        name = labels[v] if labels else str(v)
        levels = canon[v]
        first = levels[0]
        if first.y <= 0:
            demand[v] = -first.y
        else:
            demand[v] = 0
            suppliers.append(Supplier(f"k1@{name}", v, 1, 0, first.y))
        for ell in range(1, len(levels)):
            suppliers.append(Supplier(f"k{ell + 1}@{name}", v, ell + 1, levels[ell].h,
                                      levels[ell].y - levels[ell - 1].y))
    instance = CflInstance(t.locations, t.dist, demand, tuple(suppliers))
    logger.info(f"CFL instance: {len(suppliers)} suppliers, {instance.total_demand} demand unit(s)")
    return instance


def lift_cfl_to_tcsd(canon: Mapping[int, Tuple[CanonicalPair, ...]], cfl: CflInstance,
                     solution: CflSolution) -> Dict[int, int]:
    """Per location, the canonical level of its highest open supplier (level 1 if none).

    Returns:
        Location → index into its canonical list.

    Raises:
        InvalidSolutionError: the solution does not cover the demand.
    """
    capacity = sum(cfl.suppliers[k].capacity for k in solution.open)
    if capacity < cfl.total_demand:
        raise InvalidSolutionError(f"CFL solution opens capacity {capacity} < demand {cfl.total_demand}")
    levels = {v: 0 for v in canon}
    for k in solution.open:
        supplier = cfl.suppliers[k]
        levels[supplier.location] = max(levels[supplier.location], supplier.level - 1)
    return levels


def prefix_suppliers(cfl: CflInstance, levels: Mapping[int, int]) -> FrozenSet[int]:
    """Open the free supplier and every supplier up to the chosen level at each location."""
    return frozenset(k for k, s in enumerate(cfl.suppliers) if s.level - 1 <= levels[s.location])


__all__ = ["build_cfl", "lift_cfl_to_tcsd", "prefix_suppliers"]
