"""
Client aggregation (I¹) and facility aggregation (I²).

I¹ moves every client onto its stage-1 facility σ°_j and makes S° free.
I² moves every facility of the open ball N_v = {i : d¹(v, i) < ℓ_v/2} onto v and
charges it (2/3)·n_v·d¹(v, i) extra. Both instances keep F, C and B, so any
solution of one is a solution of the others.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from ..core.instance import LbflInstance, LbflSolution, Number, cost_of
from ..errors import DegenerateInstanceError, InternalConsistencyError
from .ufl_stage import BetaCoveredSolution

logger = logging.getLogger(__name__)

SURCHARGE = Fraction(2, 3)


def _matrix(instance: LbflInstance) -> np.ndarray:
    size = instance.m + instance.n
    return np.array(instance.dist, dtype=np.int64).reshape(size, size)


@dataclass(frozen=True)
class StageI1:
    """I¹ = (F, C, d¹, f¹, B) together with the stage-1 solution it was built from."""

    original: LbflInstance
    base: LbflInstance
    covered: BetaCoveredSolution

    @property
    def s_circ(self) -> FrozenSet[int]:
        return self.covered.s_circ

    @property
    def n(self) -> Dict[int, int]:
        return self.covered.n

    def connection_gap(self, assign: Tuple[int, ...]) -> Tuple[int, int]:
        """(|ccost_{I¹}(σ) − ccost_I(σ)|, ccost_I(σ°)); the first never exceeds the second."""
        ccost_1 = sum(self.base.fc(i, j) for j, i in enumerate(assign))
        ccost = sum(self.original.fc(i, j) for j, i in enumerate(assign))
        moved = sum(self.original.fc(v, j) for j, v in enumerate(self.covered.sigma_circ))
        return abs(ccost_1 - ccost), moved


def aggregate_clients(instance: LbflInstance, covered: BetaCoveredSolution) -> StageI1:
    """Build I¹: d¹(x, y) = d(loc x, loc y) with loc(j) = σ°_j, and f¹ = 0 on S°."""
    m = instance.m
    location = np.array(list(range(m)) + list(covered.sigma_circ), dtype=np.int64)
    d1 = _matrix(instance)[np.ix_(location, location)]
    costs = [0 if i in covered.s_circ else instance.cost(i) for i in range(m)]
    base = instance.replace(costs=costs, dist=d1.tolist())
    logger.info(f"Aggregated {instance.n} clients onto {len(covered.s_circ)} location(s)")
    return StageI1(instance, base, covered)


@dataclass(frozen=True)
class StageI2:
    """I² = (F, C, d², f², B) with the radii ℓ_v, balls N_v and facility locations φ."""

    i1: StageI1
    base: LbflInstance
    ell: Dict[int, int]
    N: Dict[int, FrozenSet[int]]
    phi: Tuple[int, ...]

    @property
    def s_circ(self) -> FrozenSet[int]:
        return self.i1.s_circ

    @property
    def n(self) -> Dict[int, int]:
        return self.i1.n

    @property
    def locations(self) -> List[int]:
        return sorted(self.s_circ)

    def ball_of(self, i: int) -> Optional[int]:
        """The location v with i ∈ N_v, if any."""
        v = self.phi[i]
        return v if v in self.s_circ and i in self.N[v] else None


def aggregate_facilities(i1: StageI1) -> StageI2:
    """Build I² from I¹.

    Raises:
        DegenerateInstanceError: fewer than two stage-1 locations.
        InternalConsistencyError: two balls overlap.
    """
    locations = sorted(i1.s_circ)
    if len(locations) < 2:
        raise DegenerateInstanceError(f"facility aggregation needs |S°| >= 2, got {len(locations)}")

    base1 = i1.base
    m, n = base1.m, base1.n
    ell = {v: min(base1.d(v, u) for u in locations if u != v) for v in locations}
    N = {v: frozenset(i for i in range(m) if 2 * base1.d(v, i) < ell[v]) for v in locations}

    phi = list(range(m))
    owner: Dict[int, int] = {}
    for v in locations:
        for i in N[v]:
            if i in owner:
                raise InternalConsistencyError(
                    f"facility {base1.facilities[i].id} lies in two balls ({owner[i]} and {v})")
            owner[i] = v
            phi[i] = v

    location = np.array(phi + [m + j for j in range(n)], dtype=np.int64)
    d2 = _matrix(base1)[np.ix_(location, location)]

    costs: List[Number] = [base1.cost(i) for i in range(m)]
    for v in locations:
        for i in N[v]:
            surcharge = SURCHARGE * i1.n[v] * base1.d(v, i)
            if surcharge:
                costs[i] = Fraction(costs[i]) + surcharge
    base = base1.replace(costs=costs, dist=d2.tolist())

    moved = sum(len(N[v]) - 1 for v in locations)
    logger.info(f"Aggregated {moved} facilit{'y' if moved == 1 else 'ies'} into {len(locations)} balls")
    return StageI2(i1, base, ell, N, tuple(phi))


def metric_doubling_gap(i2: StageI2) -> int:
    """max over facilities i and clients j of d²(i, j) − 2·d¹(i, j); never positive."""
    d1, d2 = i2.i1.base, i2.base
    if d1.m == 0 or d1.n == 0:
        return 0
    return max(d2.fc(i, j) - 2 * d1.fc(i, j) for i in range(d1.m) for j in range(d1.n))


def outside_balls_are_far(i2: StageI2) -> bool:
    """Every facility outside ∪N_v is at d² distance at least ℓ_v/2 from every v."""
    outside = [i for i in range(i2.base.m) if i2.ball_of(i) is None]
    return all(2 * i2.base.d(i, v) >= i2.ell[v] for i in outside for v in i2.locations)


def collapse_to_one_per_ball(i2: StageI2, solution: LbflSolution) -> LbflSolution:
    """Keep in every ball only the open facility nearest to its center and redirect the rest.

    Maps a solution of I¹ to one of I² costing at most 8/3 as much.
    """
    d1 = i2.i1.base
    opened = set(solution.open)
    redirect: Dict[int, int] = {}
    for v in i2.locations:
        inside = sorted(opened & i2.N[v], key=lambda i: (d1.d(v, i), i))
        for i in inside[1:]:
            redirect[i] = inside[0]
            opened.discard(i)
    assign = tuple(redirect.get(i, i) for i in solution.assign)
    return LbflSolution(frozenset(opened), assign)


def collapse_cost_pair(i2: StageI2, solution: LbflSolution) -> Tuple[Number, Number]:
    """(cost_{I²}(collapsed), cost_{I¹}(solution))."""
    collapsed = collapse_to_one_per_ball(i2, solution)
    return cost_of(i2.base, collapsed).total, cost_of(i2.i1.base, solution).total


__all__ = [
    "StageI1",
    "StageI2",
    "aggregate_clients",
    "aggregate_facilities",
    "metric_doubling_gap",
    "outside_balls_are_far",
    "collapse_to_one_per_ball",
    "collapse_cost_pair",
]
