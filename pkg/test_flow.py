#!/usr/bin/env python3
"""
Tests for the min-cost flow engine, the transportation solver and the
lower-bounded assignment, checked against plain enumeration.
"""

import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

# Add the src directory to the path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from lbfl_solver.core import validate_metric
from lbfl_solver.core.samples import example_e1, line_instance
from lbfl_solver.errors import Infeasible, InfeasibleInstanceError
from lbfl_solver.flow import MinCostFlow, TransportProblem, assign_with_lower_bounds, solve_transport


def enumerate_transport(problem: TransportProblem):
    """Cheapest integral shipment, splitting each demand over the supplies in every possible way.

    Returns ``None`` when the demand cannot be covered.
    """
    nodes = problem.nodes
    supplies = [v for v in nodes if problem.net[v] > 0]
    demands = [v for v in nodes if problem.net[v] < 0]
    dist = {(u, w): problem.d(u, w) for u in supplies for w in demands}

    def best_from(k, left):
        if k == len(demands):
            return 0
        w = demands[k]
        best = None
        for split in itertools.product(*(range(x + 1) for x in left)):
            if sum(split) != -problem.net[w]:
                continue
            rest = best_from(k + 1, tuple(x - s for x, s in zip(left, split)))
            if rest is None:
                continue
            cost = rest + sum(s * dist[(u, w)] for u, s in zip(supplies, split))
            best = cost if best is None else min(best, cost)
        return best

    return best_from(0, tuple(problem.net[u] for u in supplies))


def enumerate_assignment(instance, opened):
    best = None
    for assign in itertools.product(sorted(opened), repeat=instance.n):
        load = {i: assign.count(i) for i in opened}
        if any(load[i] < instance.bound(i) for i in opened):
            continue
        cost = sum(instance.fc(i, j) for j, i in enumerate(assign))
        best = cost if best is None else min(best, cost)
    return best


def test_min_cost_flow_basic():
    """Two routes to one demand; the cheap one has limited capacity."""
    engine = MinCostFlow(3)
    engine.add_supply(0, 3)
    engine.add_supply(2, -3)
    cheap = engine.add_edge(0, 2, 2, 1)
    engine.add_edge(0, 1, 5, 2)
    engine.add_edge(1, 2, 5, 2)
    assert engine.solve() == 2 * 1 + 1 * 4
    assert engine.flow(cheap) == 2


def test_min_cost_flow_lower_bound_and_infeasible():
    engine = MinCostFlow(2)
    engine.add_supply(0, 2)
    arc = engine.add_edge(0, 1, 5, 3, lower=2)
    assert engine.solve() == 6 and engine.flow(arc) == 2

    engine = MinCostFlow(2)
    engine.add_supply(0, 1)
    engine.add_supply(1, -2)
    engine.add_edge(0, 1, 5, 1)
    with pytest.raises(InfeasibleInstanceError):
        engine.solve()

    with pytest.raises(ValueError):
        MinCostFlow(2).add_edge(0, 1, 1, 0, lower=2)


# Five-point metric, not a line
GENERAL_METRIC = (
    (0, 3, 4, 6, 7),
    (3, 0, 2, 5, 4),
    (4, 2, 0, 3, 5),
    (6, 5, 3, 0, 2),
    (7, 4, 5, 2, 0),
)
UNIFORM_METRIC = tuple(tuple(0 if u == v else 1 for v in range(4)) for u in range(4))


def test_transport_matches_enumeration():
    """Every net vector in [−3, 3] on 2 to 5 nodes, over two fixed metrics."""
    assert not validate_metric(GENERAL_METRIC) and not validate_metric(UNIFORM_METRIC)
    checked = 0
    for metric in (GENERAL_METRIC, UNIFORM_METRIC):
        for size in range(2, len(metric) + 1):
            nodes = tuple(range(size))
            dist = tuple(row[:size] for row in metric[:size])
            for nets in itertools.product(range(-3, 4), repeat=size):
                net = dict(zip(nodes, nets))
                problem = TransportProblem(nodes, net, dist)
                expected = enumerate_transport(problem)
                if sum(nets) < 0:
                    assert expected is None
                    with pytest.raises(InfeasibleInstanceError):
                        solve_transport(problem)
                    continue
                plan = solve_transport(problem)
                assert plan.cost == expected, f"{nets}: {plan.cost} != {expected}"
                assert plan.is_feasible_for(net)
                assert all(x > 0 for x in plan.flow.values())
                checked += 1
    assert checked > 10000


def test_transport_edge_cases():
    dist = ((0, 4), (4, 0))
    assert solve_transport(TransportProblem((0, 1), {0: 2, 1: 3}, dist)).cost == 0
    plan = solve_transport(TransportProblem((0, 1), {0: 2, 1: -2}, dist))
    assert plan.cost == 8 and plan.flow == {(0, 1): 2}
    with pytest.raises(InfeasibleInstanceError):
        solve_transport(TransportProblem((0, 1), {0: 1, 1: -2}, dist))


def test_assign_with_lower_bounds_example():
    inst = example_e1()
    both = assign_with_lower_bounds(inst, [0, 1])
    assert both.connection_cost == 10
    assert sorted(both.assign).count(1) == 2

    only_a = assign_with_lower_bounds(inst, [0])
    assert only_a.assign == (0, 0, 0) and only_a.connection_cost == 10

    assert isinstance(assign_with_lower_bounds(inst, []), Infeasible)
    heavy = line_instance([("x", 0, 1, 4)], [("c1", 0), ("c2", 1)])
    assert isinstance(assign_with_lower_bounds(heavy, [0]), Infeasible)


def test_assign_matches_enumeration():
    """Up to three facilities and eight clients, every open subset."""
    rng = np.random.default_rng(11)
    for n in range(1, 9):
        for _ in range(8):
            m = int(rng.integers(1, 4))
            facilities = [(f"f{i}", int(rng.integers(0, 20)), 0, int(rng.integers(0, 4))) for i in range(m)]
            clients = [(f"c{j}", int(rng.integers(0, 20))) for j in range(n)]
            inst = line_instance(facilities, clients)
            for size in range(1, m + 1):
                for opened in itertools.combinations(range(m), size):
                    expected = enumerate_assignment(inst, opened)
                    result = assign_with_lower_bounds(inst, opened)
                    if expected is None:
                        assert isinstance(result, Infeasible)
                    else:
                        assert result.connection_cost == expected
                        assert all(i in opened for i in result.assign)
                        assert all(result.assign.count(i) >= inst.bound(i) for i in opened)


def main():
    """Run all flow tests."""
    tests = [
        test_min_cost_flow_basic,
        test_min_cost_flow_lower_bound_and_infeasible,
        test_transport_matches_enumeration,
        test_transport_edge_cases,
        test_assign_with_lower_bounds_example,
        test_assign_matches_enumeration,
    ]
    print("🧪 Testing flow engine...")
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
