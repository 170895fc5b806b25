"""
LBFL with penalty (I³) and the lift of its solutions back to I².

In I³ clients may stay unconnected (⊥); every location v of S° without an open
facility in N_v pays (2β−1)/(2β²)·n_v·ℓ_v instead. Only facilities inside the
balls are useful and at most one per ball is ever opened.

The lift connects the unconnected clients by moving them along the forest of
nearest-neighbour edges v → π_v between closed locations: a location that
collects at least B_v clients opens its free facility, otherwise it passes its
clients on. Roots formed by a 2-cycle {r, r′} fall back to r′ or to the open
location nearest to the pair.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from ..core.instance import CostBreakdown, LbflSolution, Number, Shortfall, cost_of
from ..errors import CertificateViolation, InfeasibleInstanceError, InternalConsistencyError, InvalidSolutionError
from .aggregation import StageI2
from .certificates import Certificate, certify

logger = logging.getLogger(__name__)


def penalty_coefficient(beta) -> Fraction:
    beta = Fraction(beta)
    return (2 * beta - 1) / (2 * beta * beta)


@dataclass(frozen=True)
class StageI3:
    """I³: the data of I² restricted to facilities inside the balls, plus penalties."""

    i2: StageI2
    candidates: FrozenSet[int]
    penalty_coeff: Fraction

    @property
    def beta(self) -> Fraction:
        return self.i2.i1.covered.beta

    @property
    def base(self):
        return self.i2.base

    @property
    def locations(self) -> List[int]:
        return self.i2.locations

    def penalty(self, v: int) -> Fraction:
        return self.penalty_coeff * self.i2.n[v] * self.i2.ell[v]

    def clients_at(self, v: int) -> List[int]:
        return self.i2.i1.covered.clients_at(v)


def build_penalty_instance(i2: StageI2) -> StageI3:
    candidates = frozenset().union(*i2.N.values())
    dropped = i2.base.m - len(candidates)
    coeff = penalty_coefficient(i2.i1.covered.beta)
    logger.info(f"Penalty instance: {len(candidates)} candidate facilities ({dropped} dropped), "
                f"penalty coefficient {coeff}")
    return StageI3(i2, candidates, coeff)


@dataclass(frozen=True)
class PartialSolution:
    """Open facilities and, per client, its facility or ``None`` (unconnected)."""

    open: FrozenSet[int]
    assign: Tuple[Optional[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "open", frozenset(self.open))
        object.__setattr__(self, "assign", tuple(self.assign))


def cost_lbflp(i3: StageI3, ps: PartialSolution, restrict: bool = True) -> CostBreakdown:
    """cost_{I³}(S, σ) = f²(S) + Σ_{σ_j ≠ ⊥} d²(j, σ_j) + penalties of locations with S ∩ N_v = ∅.

    Args:
        i3: the penalty instance.
        ps: the partial solution.
        restrict: require S ⊆ ∪N_v with at most one open facility per ball.
            Turn off to price an arbitrary solution of I².

    Raises:
        InvalidSolutionError: malformed solution or a lower bound is violated.
    """
    inst = i3.base
    if len(ps.assign) != inst.n:
        raise InvalidSolutionError(f"partial solution covers {len(ps.assign)} clients, instance has {inst.n}")
    for i in ps.open:
        if not 0 <= i < inst.m:
            raise InvalidSolutionError(f"unknown facility index {i}")
    if restrict:
        stray = sorted(ps.open - i3.candidates)
        if stray:
            raise InvalidSolutionError(f"facility {inst.facilities[stray[0]].id} lies outside every ball")
        for v in i3.locations:
            if len(ps.open & i3.i2.N[v]) > 1:
                raise InvalidSolutionError(f"more than one open facility in the ball of {inst.facilities[v].id}")

    load = {i: 0 for i in ps.open}
    connection = 0
    for j, i in enumerate(ps.assign):
        if i is None:
            continue
        if i not in load:
            raise InvalidSolutionError(f"client {inst.clients[j]} assigned to a facility that is not open")
        load[i] += 1
        connection += inst.fc(i, j)
    for i in sorted(ps.open):
        if load[i] < inst.bound(i):
            short = Shortfall(i, load[i], inst.bound(i))
            raise InvalidSolutionError(f"facility {inst.facilities[i].id} serves {short.served} "
                                       f"< lower bound {short.lower_bound}")

    facility = sum((inst.cost(i) for i in ps.open), 0)
    penalty = sum((i3.penalty(v) for v in i3.locations if not (ps.open & i3.i2.N[v])), Fraction(0))
    return CostBreakdown(facility, connection, penalty)


def full_solution_penalty_cost(i3: StageI3, solution: LbflSolution) -> Number:
    """cost_{I³} of a complete solution of I² (no restriction to the balls)."""
    return cost_lbflp(i3, PartialSolution(solution.open, solution.assign), restrict=False).total


def i2_to_i3_factor(beta) -> Fraction:
    beta = Fraction(beta)
    return 1 + (2 * beta - 1) / (beta * beta)


def lift_factor(beta) -> Fraction:
    beta = Fraction(beta)
    return 2 * beta / (2 * beta - 1)


def i2_to_i3_bound(i3: StageI3, solution: LbflSolution, enforce: bool = True) -> Certificate:
    """Certify cost_{I³}(solution) ≤ (1 + (2β−1)/β²)·cost_{I²}(solution) for a full solution of I²."""
    return certify("I2-to-I3", full_solution_penalty_cost(i3, solution), cost_of(i3.base, solution).total,
                   i2_to_i3_factor(i3.beta), enforce=enforce)


@dataclass
class MovingState:
    """Working state of the lift: pending clients per location and the π forest."""

    s_open: FrozenSet[int]
    s_closed: FrozenSet[int]
    pi: Dict[int, int]
    n_prime: Dict[int, int]
    pending: Dict[int, List[int]]
    host: Dict[int, int]
    graph: nx.DiGraph = field(repr=False)

    @property
    def bar_n(self) -> Dict[int, int]:
        return {v: len(clients) for v, clients in self.pending.items()}

    def components(self) -> List[FrozenSet[int]]:
        comps = [frozenset(c) for c in nx.weakly_connected_components(self.graph)]
        return sorted(comps, key=min)

    def root_cycle(self, component) -> Optional[Tuple[int, int]]:
        """The 2-cycle {v, π_v} of a component, as a sorted pair, if it has one."""
        for v in sorted(component):
            u = self.pi.get(v)
            if u is not None and self.pi.get(u) == v:
                return (min(u, v), max(u, v))
        return None


def build_moving_state(i3: StageI3, ps: PartialSolution) -> MovingState:
    """Locations split into open/closed, unconnected clients per location and π."""
    d2 = i3.base
    host: Dict[int, int] = {}
    for i in ps.open:
        v = i3.i2.ball_of(i)
        if v is None:
            raise InvalidSolutionError(f"facility {d2.facilities[i].id} lies outside every ball")
        host[v] = i
    s_open = frozenset(host)
    s_closed = frozenset(i3.locations) - s_open

    pending = {v: [j for j in i3.clients_at(v) if ps.assign[j] is None] for v in i3.locations}
    n_prime = {v: len(clients) for v, clients in pending.items()}

    pi = {}
    for v in sorted(s_closed):
        pi[v] = min((u for u in i3.locations if u != v), key=lambda u: (d2.d(v, u), u))
    graph = nx.DiGraph()
    graph.add_nodes_from(i3.locations)
    graph.add_edges_from(pi.items())
    return MovingState(s_open, s_closed, pi, n_prime, pending, host, graph)


def lift_lbflp_to_i2(i3: StageI3, ps: PartialSolution, check: bool = True) -> LbflSolution:
    """Connect the unconnected clients of an I³ solution and return a solution of I².

    Args:
        i3: the penalty instance.
        ps: a valid solution of ``i3``.
        check: assert cost_{I²}(result) ≤ (2β/(2β−1))·cost_{I³}(ps).

    Raises:
        InfeasibleInstanceError: clients are left over with no open location to go to.
        InternalConsistencyError: the π graph has a cycle longer than 2.
        CertificateViolation: the cost bound fails.
    """
    lbflp_cost = cost_lbflp(i3, ps).total
    d2 = i3.base
    state = build_moving_state(i3, ps)
    assign: List[Optional[int]] = list(ps.assign)
    opened = set(ps.open)

    def connect(v: int, facility: int) -> None:
        for j in state.pending[v]:
            assign[j] = facility
        state.pending[v] = []

    def move(v: int, target: int) -> None:
        state.pending[target].extend(state.pending[v])
        state.pending[v] = []

    def open_free(v: int) -> None:
        opened.add(v)
        state.host[v] = v
        connect(v, v)

    for v in sorted(state.s_open):
        connect(v, state.host[v])

    for component in state.components():
        cycle = state.root_cycle(component)
        tree = state.graph.subgraph(component).copy()
        if cycle is not None:
            r, r2 = sorted(cycle, key=lambda u: (d2.bound(u), u))
            tree.remove_edge(r, r2)
            root = r
        else:
            sinks = [u for u in component if tree.out_degree(u) == 0]
            if len(sinks) != 1 or sinks[0] not in state.s_open:
                raise InternalConsistencyError(f"component {sorted(component)} is not an in-tree rooted at an open location")
            root = sinks[0]
        if not nx.is_directed_acyclic_graph(tree):
            raise InternalConsistencyError(f"nearest-neighbour graph has a cycle longer than 2 in {sorted(component)}")

        for v in nx.lexicographical_topological_sort(tree):
            if v == root:
                continue
            if state.pending[v] and len(state.pending[v]) >= d2.bound(v):
                open_free(v)
            else:
                move(v, state.pi[v])

        if cycle is None:
            connect(root, state.host[root])
        elif state.pending[root]:
            if len(state.pending[root]) >= d2.bound(root):
                open_free(root)
            elif r2 in state.host:
                connect(root, state.host[r2])
            else:
                if not state.s_open:
                    raise InfeasibleInstanceError("unconnected clients but no open location", stage="lift")
                v_star = min(state.s_open, key=lambda u: (min(d2.d(u, r), d2.d(u, r2)), u))
                logger.debug(f"Root pair ({r}, {r2}) falls back to location {v_star}")
                connect(root, state.host[v_star])

    if any(i is None for i in assign):
        raise InternalConsistencyError("lift left clients unconnected")
    solution = LbflSolution(frozenset(opened), tuple(assign))
    breakdown = cost_of(d2, solution)
    if breakdown.shortfalls:
        raise InternalConsistencyError(f"lift violates a lower bound: {breakdown.shortfalls[0]}")

    newly = len(opened) - len(ps.open)
    logger.info(f"Lifted I³ solution to I²: {newly} free facilit{'y' if newly == 1 else 'ies'} opened, "
                f"cost {breakdown.total}")
    if check and breakdown.total > lift_factor(i3.beta) * lbflp_cost:
        raise CertificateViolation("I3-to-I2 lift", breakdown.total, lift_factor(i3.beta) * lbflp_cost)
    return solution


__all__ = [
    "penalty_coefficient",
    "StageI3",
    "PartialSolution",
    "MovingState",
    "build_penalty_instance",
    "cost_lbflp",
    "full_solution_penalty_cost",
    "i2_to_i3_factor",
    "lift_factor",
    "i2_to_i3_bound",
    "build_moving_state",
    "lift_lbflp_to_i2",
]
