"""
Exhaustive solvers for tiny instances, used as ground truth.

They enumerate and nothing else. The LBFL-with-penalty enumerator deliberately
avoids the flow engine so it can second-guess the TCSD path.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from ..cfl.model import CflInstance, CflSolution, eval_open_set
from ..core.instance import LbflInstance, LbflSolution, Number
from ..errors import Infeasible, SizeGuardError
from ..flow.transport import Assignment, assign_with_lower_bounds
from ..stages.penalty import PartialSolution, StageI3
from ..stages.tcsd import TcsdInstance, tcsd_cost
from ..stages.ufl_stage import UflAugmented

logger = logging.getLogger(__name__)


def _guard(what: str, size: int, limit: int) -> None:
    if size > limit:
        raise SizeGuardError(f"{what} has size {size}, oracle limit is {limit}")


def _subsets(items, include_empty: bool = False):
    items = list(items)
    for size in range(0 if include_empty else 1, len(items) + 1):
        yield from itertools.combinations(items, size)


def brute_lbfl(instance: LbflInstance, max_facilities: int = 12,
               max_clients: Optional[int] = None) -> Union[Tuple[LbflSolution, Number], Infeasible]:
    """Optimal LBFL solution by enumerating every open set.

    Raises:
        SizeGuardError: more facilities (or clients) than the guard allows.
    """
    _guard("facility set", instance.m, max_facilities)
    if max_clients is not None:
        _guard("client set", instance.n, max_clients)
    if instance.n == 0:
        return LbflSolution(frozenset(), ()), 0

    best: Optional[Tuple[LbflSolution, Number]] = None
    openable = [i for i in range(instance.m) if instance.bound(i) <= instance.n]
    for subset in _subsets(openable):
        if sum(instance.bound(i) for i in subset) > instance.n:
            continue
        result = assign_with_lower_bounds(instance, subset)
        if isinstance(result, Infeasible):
            continue
        total = sum((instance.cost(i) for i in subset), 0) + result.connection_cost
        if best is None or total < best[1]:
            best = (LbflSolution(frozenset(subset), result.assign), total)
    if best is None:
        return Infeasible("no open set satisfies the lower bounds")
    return best


def brute_ufl(aug: UflAugmented, max_facilities: int = 12) -> Tuple[FrozenSet[int], Number]:
    """Cheapest nonempty facility set of I′ under nearest-facility connections."""
    _guard("facility pool", len(aug.pool), max_facilities)
    if aug.base.n == 0:
        return frozenset(), 0
    best = min(_subsets(aug.pool), key=lambda s: (aug.cost(s), len(s), s))
    return frozenset(best), aug.cost(best)


def brute_cfl(instance: CflInstance,
              max_suppliers: int = 14) -> Union[Tuple[CflSolution, Number], Infeasible]:
    """Cheapest supplier subset, each priced by ``eval_open_set``.

    Raises:
        SizeGuardError: more suppliers than the guard allows.
    """
    _guard("supplier set", len(instance.suppliers), max_suppliers)
    best: Optional[CflSolution] = None
    for subset in _subsets(range(len(instance.suppliers)), include_empty=True):
        result = eval_open_set(instance, subset)
        if isinstance(result, Infeasible):
            continue
        if best is None or result.cost < best.cost:
            best = result
    if best is None:
        return Infeasible("no supplier set covers the demand")
    return best, best.cost


def brute_tcsd(t: TcsdInstance,
               max_vectors: int = 100_000) -> Union[Tuple[Dict[int, int], Number], Infeasible]:
    """Cheapest feasible choice vector over the product of the R_v."""
    count = 1
    for v in t.locations:
        count *= len(t.R[v])
    _guard("choice product", count, max_vectors)

    best: Optional[Tuple[Dict[int, int], Number]] = None
    for indices in itertools.product(*(range(len(t.R[v])) for v in t.locations)):
        choice = dict(zip(t.locations, indices))
        result = tcsd_cost(t, choice)
        if isinstance(result, Infeasible):
            continue
        if best is None or result.total < best[1]:
            best = (choice, result.total)
    if best is None:
        return Infeasible("every choice vector has more demand than supply")
    return best


def brute_lbflp(i3: StageI3, max_clients: int = 8) -> Tuple[PartialSolution, Number]:
    """Optimal I³ solution by direct enumeration.

    Per location: open nothing or one facility of its ball. Per location again:
    how many of its clients go to each open facility or stay unconnected.
    """
    d2 = i3.base
    _guard("client set", d2.n, max_clients)
    locations = i3.locations
    options = [[None] + sorted(i3.i2.N[v]) for v in locations]
    counts = {v: len(i3.clients_at(v)) for v in locations}

    best: Optional[Tuple[Number, Tuple, List[int]]] = None
    for config in itertools.product(*options):
        opened = [i for i in config if i is not None]
        targets: List[Optional[int]] = opened + [None]
        fixed = sum((d2.cost(i) for i in opened), Fraction(0)) + sum(
            (i3.penalty(v) for v, i in zip(locations, config) if i is None), Fraction(0))
        spreads = [list(itertools.combinations_with_replacement(range(len(targets)), counts[v]))
                   for v in locations]
        for spread in itertools.product(*spreads):
            load = [0] * len(opened)
            connection = 0
            for v, picks in zip(locations, spread):
                for k in picks:
                    if k < len(opened):
                        load[k] += 1
                        connection += d2.d(v, opened[k])
            if any(load[k] < d2.bound(i) for k, i in enumerate(opened)):
                continue
            total = fixed + connection
            if best is None or total < best[0]:
                best = (total, spread, opened)

    total, spread, opened = best
    targets = opened + [None]
    assign: List[Optional[int]] = [None] * d2.n
    for v, picks in zip(locations, spread):
        for j, k in zip(sorted(i3.clients_at(v)), picks):
            assign[j] = targets[k]
    return PartialSolution(frozenset(opened), tuple(assign)), total


__all__ = ["brute_lbfl", "brute_ufl", "brute_cfl", "brute_tcsd", "brute_lbflp"]
