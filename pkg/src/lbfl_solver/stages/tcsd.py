"""
Transportation with configurable supplies and demands (TCSD).

Every location v picks one pair (g, z) from R_v: either the penalty pair
(penalty_v, n_v), leaving v without a facility, or (f²_i, n_v − B_i) for a
facility i ∈ N_v. Positive z is supply, negative z demand; the cost is
Σ g + TC(z), TC being the optimal transportation cost under d². Clients are
the supply units, which makes the problem equivalent to I³.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from ..core.instance import CostBreakdown, Number
from ..errors import Infeasible, InternalConsistencyError, InvalidSolutionError
from ..flow.transport import TransportPlan, TransportProblem, solve_transport
from .penalty import PartialSolution, StageI3, cost_lbflp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RvPair:
    """One configuration (g, z) of a location; ``facility is None`` marks the penalty pair."""

    g: Number
    z: int
    facility: Optional[int] = None

    @property
    def is_penalty(self) -> bool:
        return self.facility is None


@dataclass(frozen=True)
class TcsdInstance:
    locations: Tuple[int, ...]
    dist: Tuple[Tuple[int, ...], ...]
    R: Dict[int, Tuple[RvPair, ...]]

    def d(self, u: int, v: int) -> int:
        return self.dist[self.locations.index(u)][self.locations.index(v)]

    def pairs(self, choice: Mapping[int, int]) -> Dict[int, RvPair]:
        try:
            return {v: self.R[v][choice[v]] for v in self.locations}
        except (KeyError, IndexError) as e:
            raise InvalidSolutionError(f"choice does not select one pair per location: {e}") from e

    def problem(self, choice: Mapping[int, int]) -> TransportProblem:
        nets = {v: p.z for v, p in self.pairs(choice).items()}
        return TransportProblem(self.locations, nets, self.dist)


def build_tcsd(i3: StageI3) -> TcsdInstance:
    """R_v = {(penalty_v, n_v)} ∪ {(f²_i, n_v − B_i) : i ∈ N_v}, penalty pair first."""
    d2 = i3.base
    locations = tuple(i3.locations)
    dist = tuple(tuple(d2.d(u, v) for v in locations) for u in locations)
    R: Dict[int, Tuple[RvPair, ...]] = {}
    for v in locations:
        n_v = i3.i2.n[v]
        pairs = [RvPair(i3.penalty(v), n_v)]
        pairs.extend(RvPair(d2.cost(i), n_v - d2.bound(i), i) for i in sorted(i3.i2.N[v]))
        R[v] = tuple(pairs)
    logger.info(f"TCSD instance: {len(locations)} locations, {sum(len(r) for r in R.values())} pairs")
    return TcsdInstance(locations, dist, R)


def tcsd_cost(t: TcsdInstance, choice: Mapping[int, int]) -> Union[CostBreakdown, Infeasible]:
    """Σ g + TC(z) split into facility, transport and penalty parts.

    Returns:
        The breakdown, or ``Infeasible`` when Σ z < 0.
    """
    pairs = t.pairs(choice)
    surplus = sum(p.z for p in pairs.values())
    if surplus < 0:
        return Infeasible(f"choice has {-surplus} more demand than supply units")
    plan = solve_transport(t.problem(choice))
    facility = sum((p.g for p in pairs.values() if not p.is_penalty), 0)
    penalty = sum((p.g for p in pairs.values() if p.is_penalty), 0)
    return CostBreakdown(facility, plan.cost, penalty)


@dataclass(frozen=True)
class CanonicalPair:
    """(h, y) with h the rounded cost; ``raw_index`` points back into R_v."""

    h: Number
    y: int
    raw_index: int


def round_up_power_of_two(g: Number) -> Number:
    """Smallest integer power of two ≥ g (exponents may be negative); 0 stays 0."""
    g = Fraction(g)
    if g <= 0:
        return 0
    k = g.numerator.bit_length() - g.denominator.bit_length()
    while Fraction(2) ** k < g:
        k += 1
    while Fraction(2) ** (k - 1) >= g:
        k -= 1
    value = Fraction(2) ** k
    return int(value) if value.denominator == 1 else value


def canonicalize_rv(t: TcsdInstance) -> Dict[int, Tuple[CanonicalPair, ...]]:
    """Round every g up to a power of two and drop dominated pairs.

    The result is strictly increasing in both h and y and starts with h = 0.
    """
    canon: Dict[int, Tuple[CanonicalPair, ...]] = {}
    for v in t.locations:
        rounded = sorted(
            ((round_up_power_of_two(p.g), p.z, k) for k, p in enumerate(t.R[v])),
            key=lambda x: (x[0], -x[1], x[2]),
        )
        kept: List[CanonicalPair] = []
        for h, y, k in rounded:
            if not kept or y > kept[-1].y:
                kept.append(CanonicalPair(h, y, k))
        canon[v] = tuple(kept)
    return canon


def canonical_tcsd(t: TcsdInstance, canon: Mapping[int, Tuple[CanonicalPair, ...]]) -> TcsdInstance:
    """The TCSD instance whose R_v are the canonical lists."""
    R = {v: tuple(RvPair(p.h, p.y, t.R[v][p.raw_index].facility) for p in canon[v]) for v in t.locations}
    return TcsdInstance(t.locations, t.dist, R)


def raw_choice(canon: Mapping[int, Tuple[CanonicalPair, ...]], levels: Mapping[int, int]) -> Dict[int, int]:
    """Map a choice over canonical lists to the raw pairs they came from."""
    return {v: canon[v][levels[v]].raw_index for v in canon}


def lift_tcsd_to_lbflp(t: TcsdInstance, i3: StageI3, choice: Mapping[int, int],
                       plan: TransportPlan) -> PartialSolution:
    """Turn a TCSD choice and its transport plan into a solution of I³.

    A facility pair opens its facility and connects local clients (ascending
    index) up to B_i; shipped units become concrete clients taken from the
    source location in ascending index. Unshipped surplus clients stay ⊥.
    The three cost components of the result equal the TCSD ones exactly.

    Raises:
        InternalConsistencyError: the plan does not fit the choice.
    """
    pairs = t.pairs(choice)
    nets = {v: p.z for v, p in pairs.items()}
    if not plan.is_feasible_for(nets):
        raise InternalConsistencyError("transport plan leaves some demand unmet")

    d2 = i3.base
    assign: List[Optional[int]] = [None] * d2.n
    available: Dict[int, List[int]] = {}
    opened = set()
    for v in t.locations:
        local = sorted(i3.clients_at(v))
        pair = pairs[v]
        if pair.is_penalty:
            available[v] = local
            continue
        i = pair.facility
        opened.add(i)
        keep = min(len(local), d2.bound(i))
        for j in local[:keep]:
            assign[j] = i
        available[v] = local[keep:]

    for (u, w), units in sorted(plan.flow.items()):
        target = pairs[w]
        if target.is_penalty:
            raise InternalConsistencyError(f"plan ships {units} unit(s) to location {w}, which opens nothing")
        if len(available[u]) < units:
            raise InternalConsistencyError(f"plan ships {units} unit(s) from location {u}, "
                                           f"only {len(available[u])} client(s) available")
        for j in available[u][:units]:
            assign[j] = target.facility
        available[u] = available[u][units:]

    ps = PartialSolution(frozenset(opened), tuple(assign))
    try:
        breakdown = cost_lbflp(i3, ps)
    except InvalidSolutionError as e:
        raise InternalConsistencyError(f"reconstructed solution is invalid: {e}") from e
    expected = CostBreakdown(
        sum((p.g for p in pairs.values() if not p.is_penalty), 0),
        plan.cost,
        sum((p.g for p in pairs.values() if p.is_penalty), 0),
    )
    if breakdown != expected:
        raise InternalConsistencyError(f"reconstructed cost {breakdown} differs from TCSD cost {expected}")
    return ps


__all__ = [
    "RvPair",
    "TcsdInstance",
    "CanonicalPair",
    "build_tcsd",
    "tcsd_cost",
    "round_up_power_of_two",
    "canonicalize_rv",
    "canonical_tcsd",
    "raw_choice",
    "lift_tcsd_to_lbflp",
]
