"""
Capacitated facility location instances built from canonical R_v lists.

Locations carry demand units and suppliers; suppliers at one location are
interchangeable for routing, so a set of open suppliers is priced by
aggregating capacity per location and solving one transportation problem.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, Tuple, Union

from ..core.instance import Number
from ..errors import Infeasible
from ..flow.transport import TransportPlan, TransportProblem, solve_transport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Supplier:
    """Supplier k^v_ℓ: opening cost h^v_ℓ and capacity y^v_ℓ − y^v_{ℓ−1} (level 1 is free)."""

    id: str
    location: Hashable
    level: int
    cost: Number
    capacity: int


@dataclass(frozen=True)
class CflInstance:
    locations: Tuple[Hashable, ...]
    dist: Tuple[Tuple[int, ...], ...]
    demand: Dict[Hashable, int]
    suppliers: Tuple[Supplier, ...]

    @property
    def total_demand(self) -> int:
        return sum(self.demand.values())

    def capacity_at(self, location: Hashable, open_suppliers: Iterable[int] = None) -> int:
        chosen = range(len(self.suppliers)) if open_suppliers is None else open_suppliers
        return sum(self.suppliers[k].capacity for k in chosen if self.suppliers[k].location == location)

    def at(self, location: Hashable) -> Tuple[int, ...]:
        """Indices of the suppliers at a location, by level."""
        return tuple(sorted((k for k, s in enumerate(self.suppliers) if s.location == location),
                            key=lambda k: self.suppliers[k].level))


@dataclass(frozen=True)
class CflSolution:
    open: FrozenSet[int]
    plan: TransportPlan
    opening_cost: Number
    iterations: int = 0
    hit_iteration_cap: bool = False

    @property
    def connection_cost(self) -> Number:
        return self.plan.cost

    @property
    def cost(self) -> Number:
        return self.opening_cost + self.plan.cost

    def open_ids(self, instance: CflInstance) -> Tuple[str, ...]:
        return tuple(instance.suppliers[k].id for k in sorted(self.open))


def eval_open_set(instance: CflInstance, open_suppliers: Iterable[int]) -> Union[CflSolution, Infeasible]:
    """Price a set of open suppliers with an optimal capacitated flow to the demands.

    Returns:
        The solution, or ``Infeasible`` when open capacity falls short of the demand.
    """
    opened = frozenset(open_suppliers)
    capacity = {v: 0 for v in instance.locations}
    for k in opened:
        supplier = instance.suppliers[k]
        capacity[supplier.location] += supplier.capacity
    total = sum(capacity.values())
    if total < instance.total_demand:
        return Infeasible(f"open capacity {total} < demand {instance.total_demand}")

    net = {v: capacity[v] - instance.demand.get(v, 0) for v in instance.locations}
    plan = solve_transport(TransportProblem(instance.locations, net, instance.dist))
    opening = sum((instance.suppliers[k].cost for k in opened), 0)
    return CflSolution(opened, plan, opening)


__all__ = ["Supplier", "CflInstance", "CflSolution", "eval_open_set"]
