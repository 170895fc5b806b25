"""
Exact integral min-cost flow by successive shortest augmenting paths.

Dijkstra runs on reduced costs kept nonnegative by node potentials, so every
augmentation is a true shortest path. Arc lower bounds are removed up front by
the usual excess transformation: the forced flow is charged to ``base_cost`` and
moved into the node balances.
"""

import heapq
import logging
import math
from typing import List, Optional

from ..errors import InfeasibleInstanceError

logger = logging.getLogger(__name__)

INFINITY = math.inf


class Edge:
    __slots__ = ("src", "dst", "cap", "cost", "flow", "rev")

    def __init__(self, src: int, dst: int, cap: int, cost):
        self.src = src
        self.dst = dst
        self.cap = cap
        self.cost = cost
        self.flow = 0
        self.rev: Optional["Edge"] = None

    @property
    def residual(self) -> int:
        return self.cap - self.flow


class MinCostFlow:
    """Min-cost b-flow where every demand must be met and surplus supply may stay put."""

    def __init__(self, size: int = 0):
        self.adj: List[List[Edge]] = [[] for _ in range(size)]
        self.balance: List[int] = [0] * size
        self._arcs: List[tuple] = []  # (forward edge, lower bound)
        self.base_cost = 0
        self._solved = False

    def add_node(self) -> int:
        self.adj.append([])
        self.balance.append(0)
        return len(self.adj) - 1

    def add_supply(self, node: int, amount: int) -> None:
        """Positive amounts are supply, negative amounts demand."""
        self.balance[node] += amount

    def add_edge(self, src: int, dst: int, cap: int, cost=0, lower: int = 0) -> int:
        if lower < 0 or lower > cap:
            raise ValueError(f"invalid bounds [{lower}, {cap}] on arc {src}->{dst}")
        forward = Edge(src, dst, cap - lower, cost)
        backward = Edge(dst, src, 0, -cost)
        forward.rev, backward.rev = backward, forward
        self.adj[src].append(forward)
        self.adj[dst].append(backward)
        if lower:
            self.balance[src] -= lower
            self.balance[dst] += lower
            self.base_cost += lower * cost
        self._arcs.append((forward, lower))
        return len(self._arcs) - 1

    def flow(self, arc: int) -> int:
        forward, lower = self._arcs[arc]
        return forward.flow + lower

    def _shortest_paths(self, source: int, potential: list):
        dist = [INFINITY] * len(self.adj)
        parent: List[Optional[Edge]] = [None] * len(self.adj)
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for e in self.adj[u]:
                if e.residual <= 0:
                    continue
                nd = d + e.cost + potential[u] - potential[e.dst]
                if nd < dist[e.dst]:
                    dist[e.dst] = nd
                    parent[e.dst] = e
                    heapq.heappush(heap, (nd, e.dst))
        return dist, parent

    def solve(self):
        """Route flow so that every negative balance is met, at minimum cost.

        Returns:
            The exact total cost, including flow forced by lower bounds.

        Raises:
            InfeasibleInstanceError: some demand cannot be met.
        """
        if self._solved:
            raise RuntimeError("MinCostFlow.solve() may only be called once")
        self._solved = True

        source = self.add_node()
        sink = self.add_node()
        demand_total = 0
        for v, b in enumerate(self.balance[:source]):
            if b > 0:
                self._link(source, v, b)
            elif b < 0:
                self._link(v, sink, -b)
                demand_total += -b

        potential = [0] * len(self.adj)
        shipped = 0
        augmentations = 0
        while shipped < demand_total:
            dist, parent = self._shortest_paths(source, potential)
            if dist[sink] == INFINITY:
                break
            for v in range(len(self.adj)):
                potential[v] += min(dist[v], dist[sink])

            push = demand_total - shipped
            v = sink
            while v != source:
                e = parent[v]
                push = min(push, e.residual)
                v = e.src
            v = sink
            while v != source:
                e = parent[v]
                e.flow += push
                e.rev.flow -= push
                v = e.src
            shipped += push
            augmentations += 1

        if shipped < demand_total:
            raise InfeasibleInstanceError(
                f"only {shipped} of {demand_total} demand units can be routed", stage="flow")

        logger.debug(f"Min-cost flow: {shipped} units in {augmentations} augmentations")
        return self.base_cost + sum(forward.flow * forward.cost for forward, _ in self._arcs)

    def _link(self, src: int, dst: int, cap: int) -> None:
        forward = Edge(src, dst, cap, 0)
        backward = Edge(dst, src, 0, 0)
        forward.rev, backward.rev = backward, forward
        self.adj[src].append(forward)
        self.adj[dst].append(backward)


__all__ = ["Edge", "MinCostFlow", "INFINITY"]
