#!/usr/bin/env python3
"""
Tests for the capacitated facility location model and its local search.
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# Add the src directory to the path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from lbfl_solver.cfl import CflInstance, Supplier, eval_open_set, is_locally_stable, local_search, neighbourhood
from lbfl_solver.core import get_profile
from lbfl_solver.core.samples import feasible_suite
from lbfl_solver.errors import Infeasible, InfeasibleInstanceError
from lbfl_solver.oracle import brute_cfl
from lbfl_solver.pipeline import run_pipeline

EPS = Fraction(1, 100)


def two_site_instance():
    """Three units wanted at site 0; site 1 is four away and cheaper to open."""
    suppliers = (
        Supplier("s0", 0, 2, 10, 3),
        Supplier("s1", 1, 2, 1, 3),
        Supplier("s2", 1, 3, 2, 1),
    )
    return CflInstance((0, 1), ((0, 4), (4, 0)), {0: 3, 1: 0}, suppliers)


def random_instance(rng):
    size = int(rng.integers(1, 4))
    positions = [int(x) for x in rng.integers(0, 12, size=size)]
    dist = tuple(tuple(abs(a - b) for b in positions) for a in positions)
    locations = tuple(range(size))
    demand = {v: int(rng.integers(0, 4)) for v in locations}
    suppliers = []
    for v in locations:
        for level in range(2, 2 + int(rng.integers(0, 3))):
            suppliers.append(Supplier(f"k{level}@{v}", v, level, int(rng.integers(0, 20)), int(rng.integers(1, 4))))
    return CflInstance(locations, dist, demand, tuple(suppliers))


def test_eval_open_set():
    inst = two_site_instance()
    assert inst.total_demand == 3
    assert eval_open_set(inst, {0}).cost == 10
    only_s1 = eval_open_set(inst, {1})
    assert only_s1.opening_cost == 1 and only_s1.connection_cost == 12
    assert eval_open_set(inst, {1, 2}).cost == 15
    assert isinstance(eval_open_set(inst, set()), Infeasible)
    assert isinstance(eval_open_set(inst, {2}), Infeasible)
    assert inst.capacity_at(1) == 4 and inst.at(1) == (1, 2)


def test_neighbourhood_size():
    inst = two_site_instance()
    moves = neighbourhood(inst, frozenset({0}))
    assert [m.kind for m in moves].count("drop") == 1
    assert [m.kind for m in moves].count("add") == 2
    assert [m.kind for m in moves].count("swap") == 2


def test_local_search_on_two_sites():
    """All open (13) → drop s2 (11) → drop s1 (10), then nothing improves."""
    inst = two_site_instance()
    result = local_search(inst, EPS)
    assert result.open == frozenset({0})
    assert result.cost == 10 == brute_cfl(inst)[1]
    assert result.iterations == 2 and not result.hit_iteration_cap
    assert is_locally_stable(inst, result, EPS)
    assert not is_locally_stable(inst, eval_open_set(inst, {0, 1, 2}), EPS)
    assert result.open_ids(inst) == ("s0",)


def test_iteration_cap():
    inst = two_site_instance()
    capped = local_search(inst, EPS, max_iters=1)
    assert capped.hit_iteration_cap and capped.iterations == 1
    assert capped.cost == 11


def test_infeasible_demand():
    inst = CflInstance((0,), ((0,),), {0: 5}, (Supplier("k2@0", 0, 2, 1, 2),))
    with pytest.raises(InfeasibleInstanceError):
        local_search(inst)


def test_no_demand_opens_nothing_costly():
    inst = CflInstance((0, 1), ((0, 3), (3, 0)), {0: 0, 1: 0},
                       (Supplier("k1@0", 0, 1, 0, 2), Supplier("k2@1", 1, 2, 5, 1)))
    result = local_search(inst)
    assert result.cost == 0


def test_local_search_within_factor_on_random_instances():
    rng = np.random.default_rng(5)
    checked = 0
    for _ in range(120):
        inst = random_instance(rng)
        if sum(s.capacity for s in inst.suppliers) < inst.total_demand:
            with pytest.raises(InfeasibleInstanceError):
                local_search(inst, EPS)
            continue
        result = local_search(inst, EPS)
        _, opt = brute_cfl(inst)
        assert opt <= result.cost <= 9 * (1 + EPS) * opt
        assert is_locally_stable(inst, result, EPS)
        assert local_search(inst, EPS, workers=3) == result
        checked += 1
    assert checked > 40


def test_local_search_on_derived_instances():
    """CFL instances built by the reduction stay within the local-search guarantee."""
    compared = 0
    for seed, inst in feasible_suite(80, get_profile("suite")):
        run = run_pipeline(inst)
        cfl = run.bundle.cfl
        if cfl is None or len(cfl.suppliers) > 14:
            continue
        _, opt = brute_cfl(cfl)
        assert run.bundle.cfl_solution.cost <= 9 * (1 + EPS) * opt, f"seed {seed}"
        compared += 1
    assert compared > 0


def main():
    """Run all CFL tests."""
    tests = [
        test_eval_open_set,
        test_neighbourhood_size,
        test_local_search_on_two_sites,
        test_iteration_cap,
        test_infeasible_demand,
        test_no_demand_opens_nothing_costly,
        test_local_search_within_factor_on_random_instances,
        test_local_search_on_derived_instances,
    ]
    print("🧪 Testing CFL local search...")
    print("=" * 50)
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")
    print("=" * 50)
    print(f"🎯 {len(tests) - failed}/{len(tests)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
