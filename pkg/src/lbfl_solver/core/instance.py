"""
Instance model, metric validation and costing for lower-bounded facility location.

Facilities and clients share one point index space: facility ``i`` is point ``i``,
client ``j`` is point ``m + j`` where ``m`` is the number of facilities. A single
symmetric matrix therefore serves F ∪ C. All distances are scaled integers;
opening costs are integers on input and may become exact ``Fraction`` values in
derived instances.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import MalformedInputError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


@dataclass(frozen=True)
class Facility:
    id: str
    cost: Number
    lower_bound: int


@dataclass(frozen=True)
class MetricViolation:
    """One failed metric axiom. ``points`` are point indices."""

    kind: str  # 'diagonal', 'asymmetry' or 'triangle'
    points: Tuple[int, ...]
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind} violation at {self.points}: {self.detail}"


@dataclass(frozen=True)
class LbflInstance:
    """An LBFL instance (F, C, d, f, B)."""

    facilities: Tuple[Facility, ...]
    clients: Tuple[str, ...]
    dist: Tuple[Tuple[int, ...], ...]
    scale: int = 1

    def __post_init__(self):
        object.__setattr__(self, "facilities", tuple(self.facilities))
        object.__setattr__(self, "clients", tuple(self.clients))
        object.__setattr__(self, "dist", tuple(tuple(int(x) for x in row) for row in self.dist))
        size = len(self.facilities) + len(self.clients)
        if len(self.dist) != size or any(len(row) != size for row in self.dist):
            raise MalformedInputError(f"distance matrix must be {size}x{size}")
        if any(x < 0 for row in self.dist for x in row):
            raise MalformedInputError("distance matrix has a negative entry")
        for fac in self.facilities:
            if fac.cost < 0 or fac.lower_bound < 0:
                raise MalformedInputError(f"facility {fac.id} has a negative cost or lower bound")
        ids = [f.id for f in self.facilities] + list(self.clients)
        if len(set(ids)) != len(ids):
            raise MalformedInputError("facility and client ids must be unique")
        if self.scale < 1:
            raise MalformedInputError("scale must be a positive integer")

    @property
    def m(self) -> int:
        return len(self.facilities)

    @property
    def n(self) -> int:
        return len(self.clients)

    def client_point(self, j: int) -> int:
        return self.m + j

    def d(self, p: int, q: int) -> int:
        """Distance between two points of the shared index space."""
        return self.dist[p][q]

    def fc(self, i: int, j: int) -> int:
        """Distance between facility ``i`` and client ``j``."""
        return self.dist[i][self.m + j]

    def cost(self, i: int) -> Number:
        return self.facilities[i].cost

    def bound(self, i: int) -> int:
        return self.facilities[i].lower_bound

    def facility_index(self) -> Dict[str, int]:
        return {f.id: i for i, f in enumerate(self.facilities)}

    def client_index(self) -> Dict[str, int]:
        return {c: j for j, c in enumerate(self.clients)}

    def nearest(self, j: int, candidates: Iterable[int]) -> int:
        """Nearest candidate facility to client ``j``, ties by facility index."""
        return min(candidates, key=lambda i: (self.fc(i, j), i))

    def replace(self, costs: Optional[Sequence[Number]] = None,
                dist: Optional[Sequence[Sequence[int]]] = None) -> "LbflInstance":
        """Copy with rewritten opening costs and/or metric (same F, C, B)."""
        facilities = self.facilities
        if costs is not None:
            facilities = tuple(Facility(f.id, c, f.lower_bound) for f, c in zip(self.facilities, costs))
        return LbflInstance(facilities, self.clients, self.dist if dist is None else dist, self.scale)


@dataclass(frozen=True)
class LbflSolution:
    """A pair (S, σ): open facility indices and, per client, its facility index."""

    open: FrozenSet[int]
    assign: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "open", frozenset(self.open))
        object.__setattr__(self, "assign", tuple(self.assign))

    def load(self) -> Dict[int, int]:
        counts = {i: 0 for i in self.open}
        for i in self.assign:
            counts[i] = counts.get(i, 0) + 1
        return counts


@dataclass(frozen=True)
class Shortfall:
    facility: int
    served: int
    lower_bound: Number

    @property
    def deficit(self) -> Number:
        return self.lower_bound - self.served


@dataclass(frozen=True)
class CostBreakdown:
    facility_cost: Number = 0
    connection_cost: Number = 0
    penalty_cost: Number = 0
    shortfalls: Tuple[Shortfall, ...] = field(default=(), compare=False)

    @property
    def total(self) -> Number:
        return self.facility_cost + self.connection_cost + self.penalty_cost

    @property
    def respects_bounds(self) -> bool:
        return not self.shortfalls


def validate_metric(dist) -> List[MetricViolation]:
    """Check symmetry, zero diagonal and the triangle inequality.

    Zero distances between distinct points are allowed (pseudometric).

    Args:
        dist: square matrix of nonnegative numbers.

    Returns:
        All violations; empty iff ``dist`` is a pseudometric. Triangle violations
        are reported as ``(a, b, c)`` meaning d(a, c) > d(a, b) + d(b, c).

    Raises:
        MalformedInputError: non-square, non-numeric or negative input.
    """
    try:
        d = np.array(dist, dtype=np.int64) if len(dist) else np.zeros((0, 0), dtype=np.int64)
    except (ValueError, TypeError) as e:
        raise MalformedInputError("distance matrix is not a numeric matrix") from e
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise MalformedInputError(f"distance matrix must be square, got shape {d.shape}")
    if (d < 0).any():
        raise MalformedInputError("distance matrix has a negative entry")

    violations: List[MetricViolation] = []
    for p in np.flatnonzero(np.diag(d)):
        violations.append(MetricViolation("diagonal", (int(p),), f"d = {int(d[p, p])}"))
    asym = np.argwhere(np.triu(d != d.T, k=1))
    for p, q in asym:
        p, q = int(p), int(q)
        violations.append(MetricViolation("asymmetry", (p, q), f"{int(d[p, q])} != {int(d[q, p])}"))

    size = d.shape[0]
    # symmetric matrices only need unordered endpoint pairs
    pair_mask = np.triu(np.ones((size, size), dtype=bool), k=1) if not len(asym) \
        else ~np.eye(size, dtype=bool)
    triangles = []
    for b in range(size):
        bad = (d > d[:, b][:, None] + d[b, :][None, :]) & pair_mask
        bad[b, :] = False
        bad[:, b] = False
        for a, c in np.argwhere(bad):
            triangles.append((int(a), b, int(c)))
    for a, b, c in sorted(triangles):
        violations.append(MetricViolation(
            "triangle", (a, b, c), f"{int(d[a, c])} > {int(d[a, b])} + {int(d[b, c])}"))
    return violations


def cost_of(instance: LbflInstance, sol: LbflSolution) -> CostBreakdown:
    """Exact facility + connection cost of a (possibly only β-covered) solution.

    Lower-bound shortfalls are recorded in the breakdown, not raised.

    Raises:
        MalformedInputError: unknown indices, missing clients, or a client
            assigned to a facility that is not open.
    """
    if len(sol.assign) != instance.n:
        raise MalformedInputError(f"solution assigns {len(sol.assign)} clients, instance has {instance.n}")
    for i in sol.open:
        if not 0 <= i < instance.m:
            raise MalformedInputError(f"unknown facility index {i}")
    for j, i in enumerate(sol.assign):
        if i not in sol.open:
            raise MalformedInputError(f"client {instance.clients[j]} assigned to a facility that is not open")

    facility_cost = sum((instance.cost(i) for i in sol.open), 0)
    connection_cost = sum(instance.fc(i, j) for j, i in enumerate(sol.assign))
    load = sol.load()
    shortfalls = tuple(
        Shortfall(i, load[i], instance.bound(i))
        for i in sorted(sol.open) if load[i] < instance.bound(i)
    )
    return CostBreakdown(facility_cost, connection_cost, 0, shortfalls)


@dataclass(frozen=True)
class CheckVerdict:
    feasible: bool
    issues: Tuple[str, ...]
    cost: Optional[CostBreakdown] = None
    solution: Optional[LbflSolution] = None


def check_solution(instance: LbflInstance, open_ids: Iterable[str],
                   assign_ids: Mapping[str, str]) -> CheckVerdict:
    """Validate an externally produced solution given by ids.

    Returns a verdict naming every problem found: unknown ids, unassigned
    clients, assignments to closed facilities and lower-bound deficits.
    """
    fidx = instance.facility_index()
    cidx = instance.client_index()
    issues: List[str] = []

    open_set = set()
    for fid in open_ids:
        if fid not in fidx:
            issues.append(f"unknown facility '{fid}' in open set")
        else:
            open_set.add(fidx[fid])
    for cid in assign_ids:
        if cid not in cidx:
            issues.append(f"unknown client '{cid}' in assignment")

    assign: List[Optional[int]] = []
    for cid in instance.clients:
        fid = assign_ids.get(cid)
        if fid is None:
            issues.append(f"client '{cid}' is not assigned")
            assign.append(None)
        elif fid not in fidx:
            issues.append(f"client '{cid}' assigned to unknown facility '{fid}'")
            assign.append(None)
        elif fidx[fid] not in open_set:
            issues.append(f"client '{cid}' assigned to facility '{fid}' which is not open")
            assign.append(None)
        else:
            assign.append(fidx[fid])

    if issues:
        return CheckVerdict(False, tuple(issues))

    sol = LbflSolution(frozenset(open_set), tuple(assign))
    cost = cost_of(instance, sol)
    for s in cost.shortfalls:
        issues.append(f"facility '{instance.facilities[s.facility].id}' serves {s.served} "
                      f"< lower bound {s.lower_bound} (deficit {s.deficit})")
    return CheckVerdict(not issues, tuple(issues), cost, sol)


def disjoint_union(a: LbflInstance, b: LbflInstance) -> LbflInstance:
    """Union of two instances placed far apart.

    Cross distances equal the larger diameter (at least 1), which keeps the
    triangle inequality. Ids are prefixed with ``L.`` and ``R.``.
    """
    if a.scale != b.scale:
        raise MalformedInputError("cannot join instances with different scales")
    gap = max([1] + [x for row in a.dist for x in row] + [x for row in b.dist for x in row])
    facilities = tuple(Facility(f"L.{f.id}", f.cost, f.lower_bound) for f in a.facilities) + \
        tuple(Facility(f"R.{f.id}", f.cost, f.lower_bound) for f in b.facilities)
    clients = tuple(f"L.{c}" for c in a.clients) + tuple(f"R.{c}" for c in b.clients)

    # new point order: F_a, F_b, C_a, C_b
    origin = [("a", i) for i in range(a.m)] + [("b", i) for i in range(b.m)] + \
        [("a", a.m + j) for j in range(a.n)] + [("b", b.m + j) for j in range(b.n)]
    dist = [[(a.d(p, q) if sp == "a" else b.d(p, q)) if sp == sq else gap
             for sq, q in origin] for sp, p in origin]
    return LbflInstance(facilities, clients, dist, a.scale)


def union_solution(a: LbflInstance, sa: LbflSolution, sb: LbflSolution) -> LbflSolution:
    """Solution of ``disjoint_union(a, b)`` combining ``sa`` and ``sb``."""
    shift = a.m
    return LbflSolution(
        frozenset(sa.open) | {i + shift for i in sb.open},
        tuple(sa.assign) + tuple(i + shift for i in sb.assign),
    )


def format_exact(value: Number) -> str:
    """Exact scaled value as an integer or 'num/den' string."""
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def unscaled(value: Number, scale: int) -> float:
    return float(Fraction(value) / scale)


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
]
