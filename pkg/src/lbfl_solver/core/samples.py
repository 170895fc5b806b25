"""
Small named instances and seeded suites shared by the benchmark harness and the tests.
"""

from typing import Iterator, List, Sequence, Tuple

from .generator import GeneratorProfile, generate_instance
from .instance import Facility, LbflInstance


def line_instance(facilities: Sequence[Tuple[str, int, int, int]],
                  clients: Sequence[Tuple[str, int]], scale: int = 1) -> LbflInstance:
    """Instance on a line from (id, position, cost, lower_bound) and (id, position) tuples."""
    positions = [p for _, p, _, _ in facilities] + [p for _, p in clients]
    dist = [[abs(x - y) for y in positions] for x in positions]
    return LbflInstance(
        tuple(Facility(fid, cost, bound) for fid, _, cost, bound in facilities),
        tuple(cid for cid, _ in clients),
        dist,
        scale,
    )


def example_e1() -> LbflInstance:
    """Facilities a (at 0, f=1, B=1) and b (at 10, f=1, B=2); clients c1, c2 at 0 and c3 at 10."""
    return line_instance(
        [("a", 0, 1, 1), ("b", 10, 1, 2)],
        [("c1", 0), ("c2", 0), ("c3", 10)],
    )


def collocated_free_instance(n_clients: int = 4) -> LbflInstance:
    """All clients on one point with a free B=0 facility there, plus a costly far facility."""
    return line_instance(
        [("free", 0, 0, 0), ("far", 7, 5, 1)],
        [(f"c{j}", 0) for j in range(n_clients)],
    )


def random_suite(count: int, profile: GeneratorProfile = GeneratorProfile(),
                 first_seed: int = 0) -> Iterator[Tuple[int, LbflInstance]]:
    for seed in range(first_seed, first_seed + count):
        yield seed, generate_instance(seed, profile)


def feasible_suite(count: int, profile: GeneratorProfile = GeneratorProfile(),
                   first_seed: int = 0) -> List[Tuple[int, LbflInstance]]:
    """Seeded instances that admit at least one feasible solution."""
    return [
        (seed, inst) for seed, inst in random_suite(count, profile, first_seed)
        if inst.n == 0 or any(f.lower_bound <= inst.n for f in inst.facilities)
    ]


__all__ = ["line_instance", "example_e1", "collocated_free_instance", "random_suite", "feasible_suite"]
