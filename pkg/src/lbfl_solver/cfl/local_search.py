"""
Add / drop / swap local search for capacitated facility location.

Starts with every supplier open and repeatedly takes the best move, each move
priced exactly by ``eval_open_set``. A move counts only if it improves the cost
by more than eps·cost/|suppliers|. Moves in one scan can be priced on a thread
pool; acceptance is always serial and deterministic.
"""

import concurrent.futures
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple

from ..errors import Infeasible, InfeasibleInstanceError
from .model import CflInstance, CflSolution, eval_open_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Move:
    kind: str  # 'drop', 'add' or 'swap'
    out: Optional[int] = None
    into: Optional[int] = None

    def apply(self, current: FrozenSet[int]) -> FrozenSet[int]:
        result = set(current)
        if self.out is not None:
            result.discard(self.out)
        if self.into is not None:
            result.add(self.into)
        return frozenset(result)

    @property
    def key(self) -> Tuple:
        return ({"drop": 0, "add": 1, "swap": 2}[self.kind],
                -1 if self.out is None else self.out,
                -1 if self.into is None else self.into)


def neighbourhood(instance: CflInstance, current: FrozenSet[int]) -> List[Move]:
    opened = sorted(current)
    closed = [k for k in range(len(instance.suppliers)) if k not in current]
    moves = [Move("drop", out=k) for k in opened]
    moves += [Move("add", into=k) for k in closed]
    moves += [Move("swap", out=a, into=b) for a in opened for b in closed]
    return moves


def _threshold(instance: CflInstance, cost, eps: Fraction) -> Fraction:
    return Fraction(eps) * Fraction(cost) / max(len(instance.suppliers), 1)


def _price(instance: CflInstance, current: FrozenSet[int], moves: List[Move], workers: int):
    candidates = [m.apply(current) for m in moves]
    if workers > 1 and len(candidates) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda s: eval_open_set(instance, s), candidates))
    return [eval_open_set(instance, s) for s in candidates]


def best_move(instance: CflInstance, solution: CflSolution, eps: Fraction = Fraction(1, 100),
              workers: int = 1) -> Optional[Tuple[Move, CflSolution]]:
    """The best improving move, ties broken by move kind then supplier index; None at a local optimum."""
    moves = neighbourhood(instance, solution.open)
    priced = _price(instance, solution.open, moves, workers)
    best: Optional[Tuple[Move, CflSolution]] = None
    for move, result in zip(moves, priced):
        if isinstance(result, Infeasible):
            continue
        if best is None or (result.cost, move.key) < (best[1].cost, best[0].key):
            best = (move, result)
    if best is None or solution.cost - best[1].cost <= _threshold(instance, solution.cost, eps):
        return None
    return best


def local_search(instance: CflInstance, eps: Fraction = Fraction(1, 100), max_iters: int = 10_000,
                 workers: int = 1) -> CflSolution:
    """Approximately locally optimal CFL solution.

    Args:
        instance: the CFL instance.
        eps: relative improvement threshold (0 means any strict improvement).
        max_iters: safety cap on accepted moves; reaching it is logged as a warning.
        workers: threads used to price the moves of one scan.

    Raises:
        InfeasibleInstanceError: even all suppliers together cannot cover the demand.
    """
    current = eval_open_set(instance, range(len(instance.suppliers)))
    if isinstance(current, Infeasible):
        raise InfeasibleInstanceError(current.reason, stage="cfl")

    iterations = 0
    hit_cap = False
    while True:
        if iterations >= max_iters:
            hit_cap = True
            logger.warning(f"CFL local search stopped at the iteration cap ({max_iters}); "
                           f"the result may not be locally optimal")
            break
        found = best_move(instance, current, eps, workers)
        if found is None:
            break
        move, current = found
        iterations += 1
        logger.debug(f"Move {iterations}: {move.kind} out={move.out} in={move.into} -> cost {current.cost}")

    logger.info(f"CFL local search: {iterations} move(s), cost {current.cost}, "
                f"{len(current.open)}/{len(instance.suppliers)} suppliers open")
    return replace(current, iterations=iterations, hit_iteration_cap=hit_cap)


def is_locally_stable(instance: CflInstance, solution: CflSolution, eps: Fraction = Fraction(1, 100)) -> bool:
    """No single add, drop or swap improves by more than the threshold."""
    return best_move(instance, solution, eps) is None


__all__ = ["Move", "neighbourhood", "best_move", "local_search", "is_locally_stable"]
