"""
Bi-criteria stage: a β-covered solution through an auxiliary UFL instance.

Every facility is charged f′_i = f_i + (2β/(1−β))·Σ_{j∈J_i} d(i, j), with J_i
its B_i nearest clients. The UFL instance is solved by the dual-fitting greedy,
whose contract is

    cost_{I′}(S′) ≤ f′(T) + 2·conn(T)   for every facility set T,

and any solver meeting that contract can be substituted. The greedy's set is then
pruned by closing facilities until no single closing keeps the cost from going
up, which leaves every open facility with at least β·B_i nearest clients.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..core.instance import LbflInstance, LbflSolution, Number
from ..errors import CertificateViolation, InfeasibleInstanceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UflAugmented:
    """The UFL instance I′. Only facilities in ``pool`` (B_i ≤ |C|) take part."""

    base: LbflInstance
    beta: Fraction
    pool: Tuple[int, ...]
    f_prime: Dict[int, Fraction]
    J: Dict[int, Tuple[int, ...]]

    @property
    def coefficient(self) -> Fraction:
        return 2 * self.beta / (1 - self.beta)

    def connection(self, facilities: Iterable[int]) -> Number:
        facilities = list(facilities)
        if not facilities:
            return 0 if self.base.n == 0 else math.inf
        return sum(min(self.base.fc(i, j) for i in facilities) for j in range(self.base.n))

    def cost(self, facilities: Iterable[int]) -> Number:
        """cost_{I′}(S) with nearest-facility connections; infinite for S = ∅ when clients exist."""
        facilities = list(facilities)
        return sum((self.f_prime[i] for i in facilities), Fraction(0)) + self.connection(facilities)


@dataclass(frozen=True)
class BetaCoveredSolution:
    """(S°, σ°) with per-location client counts n_v."""

    s_circ: FrozenSet[int]
    sigma_circ: Tuple[int, ...]
    n: Dict[int, int]
    beta: Fraction

    def as_solution(self) -> LbflSolution:
        return LbflSolution(self.s_circ, self.sigma_circ)

    def clients_at(self, v: int) -> List[int]:
        return [j for j, i in enumerate(self.sigma_circ) if i == v]


def build_ufl_instance(instance: LbflInstance, beta) -> UflAugmented:
    """Build I′ from an LBFL instance.

    Facilities with B_i > |C| can never be opened and are left out of the pool.
    J_i is ordered by (distance, client index).
    """
    beta = Fraction(beta)
    coefficient = 2 * beta / (1 - beta)
    pool = tuple(i for i in range(instance.m) if instance.bound(i) <= instance.n)
    f_prime: Dict[int, Fraction] = {}
    J: Dict[int, Tuple[int, ...]] = {}
    for i in pool:
        nearest = sorted(range(instance.n), key=lambda j: (instance.fc(i, j), j))
        J[i] = tuple(nearest[:instance.bound(i)])
        f_prime[i] = Fraction(instance.cost(i)) + coefficient * sum(instance.fc(i, j) for j in J[i])
    excluded = instance.m - len(pool)
    if excluded:
        logger.info(f"Excluded {excluded} facilit{'y' if excluded == 1 else 'ies'} with B_i > |C|")
    return UflAugmented(instance, beta, pool, f_prime, J)


def _payment_time(target: Fraction, paid: Fraction, distances: List[int], now: Fraction) -> Fraction:
    """Earliest t ≥ now at which paid + Σ max(t − d, 0) reaches target."""
    remaining = target - paid
    if remaining <= 0:
        return now
    ds = sorted(distances)
    prefix = 0
    for k, d in enumerate(ds, start=1):
        prefix += d
        t = Fraction(remaining + prefix, k)
        if t >= d and (k == len(ds) or t <= ds[k]):
            return max(t, now)
    raise ValueError("no unconnected client left to pay for a facility")


def jms_solve(aug: UflAugmented) -> FrozenSet[int]:
    """Dual-fitting greedy for I′.

    Budgets of unconnected clients grow uniformly with time t. Unconnected
    clients offer max(t − d, 0) to each closed facility; connected clients offer
    the saving max(c_j − d, 0) over their current connection cost c_j. A facility
    opens as soon as the offers pay f′_i, and every client whose offer was positive
    switches to it. Events at the same time are handled connections first, then by
    facility index.

    Returns:
        The set of opened facility indices.
    """
    inst = aug.base
    if inst.n == 0:
        return frozenset()
    if not aug.pool:
        raise InfeasibleInstanceError("no facility can be opened", stage="ufl")

    t = Fraction(0)
    opened: List[int] = []
    closed = set(aug.pool)
    connected: Dict[int, int] = {}
    unconnected = set(range(inst.n))
    events = 0

    while unconnected:
        reach_time: Optional[Fraction] = None
        if opened:
            reach_time = Fraction(min(inst.fc(i, j) for j in unconnected for i in opened))

        best: Optional[Tuple[Fraction, int]] = None
        for i in sorted(closed):
            paid = Fraction(sum(max(inst.fc(connected[j], j) - inst.fc(i, j), 0) for j in connected))
            when = _payment_time(aug.f_prime[i], paid, [inst.fc(i, j) for j in unconnected], t)
            if best is None or when < best[0]:
                best = (when, i)

        if reach_time is not None and (best is None or reach_time <= best[0]):
            t = max(t, reach_time)
            for j in sorted(unconnected):
                nearest = inst.nearest(j, opened)
                if inst.fc(nearest, j) <= t:
                    connected[j] = nearest
                    unconnected.discard(j)
            logger.debug(f"t={t}: connected clients to open facilities")
        else:
            t, i = best
            closed.discard(i)
            opened.append(i)
            for j in list(connected):
                if inst.fc(i, j) < inst.fc(connected[j], j):
                    connected[j] = i
            for j in sorted(unconnected):
                if inst.fc(i, j) < t:
                    connected[j] = i
                    unconnected.discard(j)
            logger.debug(f"t={t}: opened facility {inst.facilities[i].id}")
        events += 1

    result = frozenset(opened)
    logger.info(f"Greedy opened {len(result)} facilit{'y' if len(result) == 1 else 'ies'} after {events} events")
    return result


def prune_by_closing(aug: UflAugmented, facilities: Iterable[int]) -> FrozenSet[int]:
    """Close facilities while cost_{I′}(S∖{i}) ≤ cost_{I′}(S).

    Scans in ascending index until a full pass closes nothing. The last
    facility is never closed while clients exist.
    """
    current = set(facilities)
    changed = True
    while changed:
        changed = False
        for i in sorted(current):
            if i not in current or (aug.base.n > 0 and len(current) == 1):
                continue
            without = current - {i}
            if aug.cost(without) <= aug.cost(current):
                current = without
                changed = True
                logger.debug(f"Closed facility {aug.base.facilities[i].id}")
    return frozenset(current)


def _merge_collocated(instance: LbflInstance, facilities: Iterable[int]) -> FrozenSet[int]:
    kept: List[int] = []
    for i in sorted(facilities):
        if all(instance.d(i, k) > 0 for k in kept):
            kept.append(i)
    return frozenset(kept)


def beta_covered(instance: LbflInstance, beta) -> BetaCoveredSolution:
    """Compute a β-covered solution (S°, σ°).

    Runs the greedy, prunes by closing, assigns every client to its nearest open
    facility and merges collocated open facilities into the lowest index. The
    coverage |σ°⁻¹(v)| ≥ β·B_v is re-verified exactly afterwards.

    Raises:
        InfeasibleInstanceError: every facility has B_i > |C|.
        CertificateViolation: coverage fails after merging.
    """
    beta = Fraction(beta)
    if instance.n == 0:
        return BetaCoveredSolution(frozenset(), (), {}, beta)

    aug = build_ufl_instance(instance, beta)
    if not aug.pool:
        raise InfeasibleInstanceError("every facility has a lower bound above the number of clients",
                                      stage="stage1")

    pruned = prune_by_closing(aug, jms_solve(aug))
    s_circ = _merge_collocated(instance, pruned)
    if len(s_circ) < len(pruned):
        logger.info(f"Merged {len(pruned) - len(s_circ)} collocated facilit(ies) in S°")
    sigma = tuple(instance.nearest(j, s_circ) for j in range(instance.n))
    counts = {v: 0 for v in s_circ}
    for v in sigma:
        counts[v] += 1

    for v in sorted(s_circ):
        if counts[v] < beta * instance.bound(v):
            raise CertificateViolation("beta-coverage", beta * instance.bound(v), counts[v],
                                       f"facility {instance.facilities[v].id}")
    logger.info(f"Stage 1: |S°|={len(s_circ)}, f′-cost {aug.cost(s_circ)}")
    return BetaCoveredSolution(s_circ, sigma, counts, beta)


def f_prime_bound_holds(aug: UflAugmented, solution: LbflSolution) -> bool:
    """Check f′(S) ≤ f(S) + (2β/(1−β))·ccost_I(σ) for a lower-bound-feasible solution."""
    inst = aug.base
    if any(i not in aug.f_prime for i in solution.open):
        return False
    lhs = sum((aug.f_prime[i] for i in solution.open), Fraction(0))
    rhs = sum((Fraction(inst.cost(i)) for i in solution.open), Fraction(0)) + \
        aug.coefficient * sum(inst.fc(i, j) for j, i in enumerate(solution.assign))
    return lhs <= rhs


__all__ = [
    "UflAugmented",
    "BetaCoveredSolution",
    "build_ufl_instance",
    "jms_solve",
    "prune_by_closing",
    "beta_covered",
    "f_prime_bound_holds",
]
