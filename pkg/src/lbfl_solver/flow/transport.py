"""
Transportation problems and lower-bounded assignment on top of ``MinCostFlow``.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, Mapping, Sequence, Tuple, Union

from ..core.instance import LbflInstance, Number
from ..errors import Infeasible, InfeasibleInstanceError
from .min_cost_flow import MinCostFlow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TransportProblem:
    """Integral transportation between locations.

    ``net[v] > 0`` is supply, ``net[v] < 0`` demand; surplus supply may stay unshipped.
    ``dist`` is the metric restricted to ``nodes``, indexed by node position.
    """

    nodes: Tuple[Hashable, ...]
    net: Mapping[Hashable, int]
    dist: Tuple[Tuple[Number, ...], ...]

    @classmethod
    def from_metric(cls, nodes: Sequence[Hashable], net: Mapping[Hashable, int],
                    d: Callable[[Hashable, Hashable], Number]) -> "TransportProblem":
        nodes = tuple(nodes)
        return cls(nodes, dict(net), tuple(tuple(d(u, v) for v in nodes) for u in nodes))

    @property
    def surplus(self) -> int:
        return sum(self.net.get(v, 0) for v in self.nodes)

    def d(self, u: Hashable, v: Hashable) -> Number:
        position = {node: k for k, node in enumerate(self.nodes)}
        return self.dist[position[u]][position[v]]


@dataclass(frozen=True)
class TransportPlan:
    """An integral flow ψ between locations and its cost TC."""

    flow: Mapping[Tuple[Hashable, Hashable], int] = field(default_factory=dict)
    cost: Number = 0

    def outflow(self, v: Hashable) -> int:
        return sum(x for (u, _), x in self.flow.items() if u == v)

    def inflow(self, v: Hashable) -> int:
        return sum(x for (_, w), x in self.flow.items() if w == v)

    @property
    def shipped(self) -> int:
        return sum(self.flow.values())

    def is_feasible_for(self, net: Mapping[Hashable, int]) -> bool:
        nodes = set(net) | {u for u, _ in self.flow} | {v for _, v in self.flow}
        return all(x >= 0 for x in self.flow.values()) and all(
            net.get(v, 0) + self.inflow(v) - self.outflow(v) >= 0 for v in nodes)


def solve_transport(problem: TransportProblem) -> TransportPlan:
    """Minimum-cost integral transportation plan.

    Args:
        problem: nodes, net supplies and the restricted metric.

    Returns:
        An optimal plan; only positive flows are listed.

    Raises:
        InfeasibleInstanceError: total demand exceeds total supply.
    """
    surplus = problem.surplus
    if surplus < 0:
        raise InfeasibleInstanceError(f"demand exceeds supply by {-surplus} unit(s)", stage="transport")

    nodes = problem.nodes
    supplies = [k for k, v in enumerate(nodes) if problem.net.get(v, 0) > 0]
    demands = [k for k, v in enumerate(nodes) if problem.net.get(v, 0) < 0]
    if not demands:
        return TransportPlan({}, 0)

    engine = MinCostFlow(len(nodes))
    for k, v in enumerate(nodes):
        engine.add_supply(k, problem.net.get(v, 0))
    arcs: Dict[int, Tuple[int, int]] = {}
    for u in supplies:
        for w in demands:
            cap = min(problem.net[nodes[u]], -problem.net[nodes[w]])
            arcs[engine.add_edge(u, w, cap, problem.dist[u][w])] = (u, w)

    cost = engine.solve()
    flow = {}
    for arc, (u, w) in arcs.items():
        x = engine.flow(arc)
        if x > 0:
            flow[(nodes[u], nodes[w])] = x
    logger.debug(f"Transport over {len(nodes)} nodes: cost {cost}, {sum(flow.values())} unit(s) shipped")
    return TransportPlan(flow, cost)


@dataclass(frozen=True)
class Assignment:
    assign: Tuple[int, ...]
    connection_cost: int


def assign_with_lower_bounds(instance: LbflInstance,
                             open_facilities: Iterable[int]) -> Union[Assignment, Infeasible]:
    """Cheapest assignment of every client to an open facility meeting all lower bounds.

    Args:
        instance: the LBFL instance.
        open_facilities: facility indices to open.

    Returns:
        The assignment and its exact connection cost, or ``Infeasible`` when the
        bounds of the open facilities exceed |C| (or no facility is open while
        clients exist).
    """
    opened = sorted(set(open_facilities))
    required = sum(instance.bound(i) for i in opened)
    if required > instance.n:
        return Infeasible(f"open facilities need {required} clients, only {instance.n} exist")
    if instance.n == 0:
        return Assignment((), 0)
    if not opened:
        return Infeasible("no open facility to serve the clients")

    n = instance.n
    sink = n + len(opened)
    engine = MinCostFlow(sink + 1)
    for j in range(n):
        engine.add_supply(j, 1)
    engine.add_supply(sink, -n)
    arcs = {}
    for j in range(n):
        for k, i in enumerate(opened):
            arcs[engine.add_edge(j, n + k, 1, instance.fc(i, j))] = (j, i)
    for k, i in enumerate(opened):
        engine.add_edge(n + k, sink, n, 0, lower=instance.bound(i))

    try:
        cost = engine.solve()
    except InfeasibleInstanceError as e:
        return Infeasible(str(e))

    assign = [-1] * n
    for arc, (j, i) in arcs.items():
        if engine.flow(arc):
            assign[j] = i
    return Assignment(tuple(assign), cost)


__all__ = ["TransportProblem", "TransportPlan", "Assignment", "solve_transport", "assign_with_lower_bounds"]
