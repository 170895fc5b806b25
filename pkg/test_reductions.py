#!/usr/bin/env python3
"""
Tests for the reduction chain: aggregation, the penalty instance, TCSD,
power-of-two rounding, the CFL instance and every lift back down.
"""

import itertools
import sys
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

# Add the src directory to the path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from lbfl_solver.cfl import CflSolution, eval_open_set
from lbfl_solver.core import cost_of, get_profile
from lbfl_solver.core.samples import feasible_suite, line_instance
from lbfl_solver.errors import Infeasible, InvalidSolutionError
from lbfl_solver.flow import TransportPlan
from lbfl_solver.oracle import brute_lbfl, brute_lbflp, brute_tcsd
from lbfl_solver.pipeline import run_pipeline
from lbfl_solver.stages import (
    BetaCoveredSolution,
    CanonicalPair,
    PartialSolution,
    RvPair,
    TcsdInstance,
    aggregate_clients,
    aggregate_facilities,
    build_cfl,
    build_moving_state,
    build_penalty_instance,
    canonical_tcsd,
    canonicalize_rv,
    collapse_cost_pair,
    collapse_to_one_per_ball,
    cost_lbflp,
    i2_to_i3_bound,
    lift_cfl_to_tcsd,
    lift_factor,
    lift_lbflp_to_i2,
    metric_doubling_gap,
    outside_balls_are_far,
    penalty_coefficient,
    prefix_suppliers,
    round_up_power_of_two,
    tcsd_cost,
)


@lru_cache(maxsize=None)
def staged_runs(count, profile_name="suite"):
    """Pipeline runs over a seeded suite that went through every stage."""
    runs = []
    for seed, inst in feasible_suite(count, get_profile(profile_name)):
        run = run_pipeline(inst)
        if run.bundle.i2 is not None:
            runs.append((seed, inst, run))
    return tuple(runs)


def two_location_tcsd():
    """v0 at 0 must pick from (0, −2), (3, 1), (8, 3); v1 at 5 offers 3 free units."""
    R = {
        0: (RvPair(0, -2, 10), RvPair(3, 1, 11), RvPair(8, 3, 12)),
        1: (RvPair(0, 3),),
    }
    return TcsdInstance((0, 1), ((0, 5), (5, 0)), R)


def pinned_stages(facilities, clients, located, beta=Fraction(2, 3)):
    """I¹, I² and I³ of a line instance with S° fixed by hand (facility ids in ``located``)."""
    inst = line_instance(facilities, clients)
    index = inst.facility_index()
    s_circ = frozenset(index[fid] for fid in located)
    sigma = tuple(inst.nearest(j, s_circ) for j in range(inst.n))
    counts = {v: sigma.count(v) for v in s_circ}
    i1 = aggregate_clients(inst, BetaCoveredSolution(s_circ, sigma, counts, beta))
    i2 = aggregate_facilities(i1)
    return inst, i1, i2, build_penalty_instance(i2)


def lift_both_sides(i3, open_ids, assign):
    """(cost_{I³} of the partial solution, lifted solution, cost_{I²} of the lift)."""
    index = i3.base.facility_index()
    ps = PartialSolution(frozenset(index[fid] for fid in open_ids),
                         tuple(None if fid is None else index[fid] for fid in assign))
    before = cost_lbflp(i3, ps).total
    lifted = lift_lbflp_to_i2(i3, ps)
    after = cost_of(i3.base, lifted)
    assert not after.shortfalls
    assert after.total <= lift_factor(i3.beta) * before
    return before, lifted, after.total


def test_penalty_coefficient():
    assert penalty_coefficient(Fraction(2, 3)) == Fraction(3, 8)
    assert penalty_coefficient(Fraction(3, 4)) == Fraction(4, 9)


def test_round_up_power_of_two():
    assert round_up_power_of_two(0) == 0
    assert round_up_power_of_two(1) == 1
    assert round_up_power_of_two(3) == 4
    assert round_up_power_of_two(4) == 4
    assert round_up_power_of_two(12) == 16
    assert round_up_power_of_two(Fraction(3, 8)) == Fraction(1, 2)
    assert round_up_power_of_two(Fraction(1, 3)) == Fraction(1, 2)


def test_canonicalize_drops_dominated_pairs():
    """{(12, 4), (0, 1), (5, −2)} rounds to {(16, 4), (0, 1), (8, −2)}; (8, −2) is dominated."""
    t = TcsdInstance((0,), ((0,),), {0: (RvPair(12, 4), RvPair(0, 1, 5), RvPair(5, -2, 6))})
    assert canonicalize_rv(t)[0] == (CanonicalPair(0, 1, 1), CanonicalPair(16, 4, 0))


def test_tcsd_cost_and_oracle():
    t = two_location_tcsd()
    assert tcsd_cost(t, {0: 0, 1: 0}).total == 10  # two units shipped over distance 5
    cheap = tcsd_cost(t, {0: 1, 1: 0})
    assert (cheap.facility_cost, cheap.connection_cost, cheap.penalty_cost) == (3, 0, 0)
    assert brute_tcsd(t) == ({0: 1, 1: 0}, 3)

    short = TcsdInstance((0,), ((0,),), {0: (RvPair(0, -1, 3),)})
    assert isinstance(tcsd_cost(short, {0: 0}), Infeasible)
    with pytest.raises(InvalidSolutionError):
        tcsd_cost(t, {0: 7, 1: 0})


def test_build_cfl_and_lift():
    t = two_location_tcsd()
    canon = canonicalize_rv(t)
    assert canon[0] == (CanonicalPair(0, -2, 0), CanonicalPair(4, 1, 1), CanonicalPair(8, 3, 2))

    cfl = build_cfl(canon, t)
    assert cfl.demand == {0: 2, 1: 0}
    assert [(s.id, s.cost, s.capacity) for s in cfl.suppliers] == [("k2@0", 4, 3), ("k3@0", 8, 2), ("k1@1", 0, 3)]

    only_k3 = eval_open_set(cfl, {1})
    assert only_k3.cost == 8
    levels = lift_cfl_to_tcsd(canon, cfl, only_k3)
    assert levels == {0: 2, 1: 0}
    assert canon[0][levels[0]] == CanonicalPair(8, 3, 2)
    assert tcsd_cost(canonical_tcsd(t, canon), levels).total <= only_k3.cost

    free_only = eval_open_set(cfl, {2})
    assert free_only.cost == 10
    assert lift_cfl_to_tcsd(canon, cfl, free_only) == {0: 0, 1: 0}

    prefix = prefix_suppliers(cfl, levels)
    assert prefix == frozenset({0, 1, 2})
    assert eval_open_set(cfl, prefix).cost == 12 <= 2 * 8

    with pytest.raises(InvalidSolutionError):
        lift_cfl_to_tcsd(canon, cfl, CflSolution(frozenset(), TransportPlan(), 0))


def test_aggregation_invariants():
    for seed, inst, run in staged_runs(80):
        i2 = run.bundle.i2
        balls = list(i2.N.values())
        for a in range(len(balls)):
            for b in range(a + 1, len(balls)):
                assert not (balls[a] & balls[b]), f"seed {seed}"
        for v in i2.locations:
            assert v in i2.N[v] and i2.phi[v] == v
        assert metric_doubling_gap(i2) <= 0, f"seed {seed}"
        assert outside_balls_are_far(i2)

        # S° facilities sit at their own positions, so d² and d¹ agree on σ°
        stage1 = run.bundle.covered.as_solution()
        assert cost_of(i2.base, stage1).connection_cost == cost_of(i2.i1.base, stage1).connection_cost


def test_ball_boundary_and_surcharge():
    """x sits exactly at ℓ_v/2 and stays out of N_v; i at distance 2 with n_v = 3 pays 5 + (2/3)·3·2."""
    inst, i1, i2, _ = pinned_stages(
        [("v", 0, 1, 2), ("u", 8, 1, 1), ("i", 2, 5, 1), ("x", 4, 3, 1)],
        [("c0", -1), ("c1", 0), ("c2", 1), ("c3", 9)],
        located=("v", "u"),
    )
    assert i1.n == {0: 3, 1: 1}
    assert i2.ell == {0: 8, 1: 8}
    assert i2.N == {0: frozenset({0, 2}), 1: frozenset({1})}
    assert i2.ball_of(3) is None and i2.phi == (0, 1, 0, 3)
    assert [i2.base.cost(i) for i in range(4)] == [0, 0, 9, 3]
    assert i2.base.fc(2, 1) == 0 and i2.base.fc(3, 1) == 4
    assert outside_balls_are_far(i2)
    assert metric_doubling_gap(i2) <= 0

    # moving clients onto S° costs 1 + 0 + 1 + 1
    worst = 0
    for assign in itertools.product(range(inst.m), repeat=inst.n):
        gap, moved = i1.connection_gap(assign)
        assert moved == 3
        assert gap <= moved, f"{assign}: {gap} > {moved}"
        worst = max(worst, gap)
    assert worst == 1


def test_connection_gap_on_random_runs():
    rng = np.random.default_rng(11)
    for seed, inst, run in staged_runs(80)[:5]:
        i1 = run.bundle.i1
        for _ in range(20):
            assign = tuple(int(i) for i in rng.integers(0, inst.m, size=inst.n))
            gap, moved = i1.connection_gap(assign)
            assert gap <= moved, f"seed {seed}"


def test_lift_chain_moves_clients_to_the_root():
    """Closed u (B=3) with one unconnected client passes it to the open w at distance 5."""
    _, _, i2, i3 = pinned_stages(
        [("w", 0, 1, 1), ("u", 5, 1, 3)],
        [("c0", 0), ("c1", 5), ("c2", 5)],
        located=("w", "u"),
    )
    assert i2.ell == {0: 5, 1: 5}
    before, lifted, after = lift_both_sides(i3, ["w"], ["w", "w", None])
    assert before == 5 + Fraction(3, 8) * 2 * 5
    assert lifted.open == frozenset({0}) and lifted.assign == (0, 0, 0)
    assert after == 10


def test_lift_opens_location_at_threshold():
    """Three unconnected clients at u with B_u = 3 open the free facility u."""
    _, _, _, i3 = pinned_stages(
        [("w", 0, 1, 1), ("u", 5, 1, 3)],
        [("c0", 0), ("c1", 5), ("c2", 5), ("c3", 5)],
        located=("w", "u"),
    )
    before, lifted, after = lift_both_sides(i3, ["w"], ["w", None, None, None])
    assert before == Fraction(45, 8)
    assert lifted.open == frozenset({0, 1}) and lifted.assign == (0, 1, 1, 1)
    assert after == 0


def test_lift_two_cycle_root():
    """r and r′ are mutual nearest neighbours; r has the smaller bound and becomes the root."""
    facilities = [("r", 0, 1, 2), ("r2", 2, 1, 3), ("a", 10, 1, 1), ("b", 20, 1, 1)]
    located = ("r", "r2", "a", "b")

    # r′ collects B_r′ clients and opens, the root's leftover client goes to r′
    _, _, _, i3 = pinned_stages(
        facilities,
        [("c0", 0), ("c1", 0), ("c2", 2), ("c3", 2), ("c4", 2), ("c5", 10), ("c6", 20)],
        located,
    )
    state = build_moving_state(i3, PartialSolution(frozenset({2, 3}), (2, None, None, None, None, 2, 3)))
    assert state.pi == {0: 1, 1: 0}
    assert state.root_cycle(frozenset({0, 1})) == (0, 1)
    before, lifted, after = lift_both_sides(i3, ["a", "b"], ["a", None, None, None, None, "a", "b"])
    assert before == 10 + Fraction(3, 8) * 2 * 2 + Fraction(3, 8) * 3 * 2
    assert lifted.open == frozenset({1, 2, 3})
    assert lifted.assign == (2, 1, 1, 1, 1, 2, 3)
    assert after == 12

    # neither r nor r′ can open: the root's clients go to a, the open location nearest the pair
    facilities[0] = ("r", 0, 1, 3)
    _, _, _, i3 = pinned_stages(
        facilities,
        [("c0", 0), ("c1", 0), ("c2", 2), ("c3", 2), ("c4", 10), ("c5", 20)],
        located,
    )
    before, lifted, after = lift_both_sides(i3, ["a", "b"], ["a", None, "a", "a", "a", "b"])
    assert before == 26 + 2 * Fraction(3, 8) * 2 * 2
    assert lifted.open == frozenset({2, 3})
    assert lifted.assign == (2, 2, 2, 2, 2, 3)
    assert after == 36


def test_forest_shape():
    """Every component of the nearest-neighbour graph has at most one 2-cycle."""
    for seed, inst, run in staged_runs(60):
        state = build_moving_state(run.bundle.i3, run.bundle.partial)
        for component in state.components():
            cycles = {tuple(sorted((v, state.pi[v]))) for v in component
                      if v in state.pi and state.pi.get(state.pi[v]) == v}
            assert len(cycles) <= 1, f"seed {seed}"
            if not cycles:
                sinks = [v for v in component if v not in state.pi]
                assert len(sinks) == 1 and sinks[0] in state.s_open


def test_stage_costs_chain():
    """TCSD reconstruction is exact and every recorded certificate holds."""
    runs = staged_runs(80)
    assert runs
    for seed, inst, run in runs:
        costs = run.report.stage_costs
        assert costs["I3"] == costs["I4"] <= costs["I4_canonical"] <= costs["I5"], f"seed {seed}"
        assert costs["I2"] <= 4 * costs["I3"]
        assert costs["I1"] <= Fraction(3, 2) * costs["I2"]
        assert run.report.all_hold
        partial = run.bundle.partial
        assert cost_lbflp(run.bundle.i3, partial).total == costs["I3"]


def test_cfl_lift_on_random_supplier_sets():
    """Any feasible supplier set lifts to a TCSD choice that costs no more."""
    rng = np.random.default_rng(3)
    for seed, inst, run in staged_runs(40):
        cfl, canon, t = run.bundle.cfl, run.bundle.canon, run.bundle.tcsd
        canonical = canonical_tcsd(t, canon)
        for _ in range(10):
            chosen = {k for k in range(len(cfl.suppliers)) if rng.random() < 0.5}
            solution = eval_open_set(cfl, chosen)
            if isinstance(solution, Infeasible):
                continue
            levels = lift_cfl_to_tcsd(canon, cfl, solution)
            lifted = tcsd_cost(canonical, levels)
            assert lifted.total <= solution.cost, f"seed {seed}"

            realized = eval_open_set(cfl, prefix_suppliers(cfl, levels))
            assert realized.cost <= 2 * lifted.total


def test_collapse_and_penalty_bounds_on_optimum():
    for seed, inst, run in staged_runs(60):
        result = brute_lbfl(inst)
        opt, _ = result
        i2 = run.bundle.i2
        collapsed_cost, cost_1 = collapse_cost_pair(i2, opt)
        assert collapsed_cost <= Fraction(8, 3) * cost_1, f"seed {seed}"
        collapsed = collapse_to_one_per_ball(i2, opt)
        for v in i2.locations:
            assert len(collapsed.open & i2.N[v]) <= 1
        assert i2_to_i3_bound(run.bundle.i3, collapsed).holds


def test_tcsd_equivalence_and_rounding():
    """brute TCSD optimum equals the direct I³ enumeration; rounding costs at most 2x."""
    compared = 0
    for seed, inst, run in staged_runs(200, "tcsd"):
        i3, t = run.bundle.i3, run.bundle.tcsd
        if len(t.locations) > 3 or inst.n > 8:
            continue
        _, tcsd_opt = brute_tcsd(t)
        partial, lbflp_opt = brute_lbflp(i3)
        assert tcsd_opt == lbflp_opt, f"seed {seed}: {tcsd_opt} != {lbflp_opt}"
        assert cost_lbflp(i3, partial).total == lbflp_opt

        _, rounded_opt = brute_tcsd(canonical_tcsd(t, run.bundle.canon))
        assert tcsd_opt <= rounded_opt <= 2 * tcsd_opt, f"seed {seed}"
        compared += 1
    assert compared >= 3


def test_cost_lbflp_rejects_bad_solutions():
    seed, inst, run = staged_runs(80)[0]
    i3 = run.bundle.i3
    with pytest.raises(InvalidSolutionError):
        cost_lbflp(i3, PartialSolution(frozenset(), (None,) * (inst.n + 1)))
    all_unconnected = cost_lbflp(i3, PartialSolution(frozenset(), (None,) * inst.n))
    assert all_unconnected.total == sum(i3.penalty(v) for v in i3.locations)


def main():
    """Run all reduction tests."""
    tests = [
        test_penalty_coefficient,
        test_round_up_power_of_two,
        test_canonicalize_drops_dominated_pairs,
        test_tcsd_cost_and_oracle,
        test_build_cfl_and_lift,
        test_aggregation_invariants,
        test_ball_boundary_and_surcharge,
        test_connection_gap_on_random_runs,
        test_lift_chain_moves_clients_to_the_root,
        test_lift_opens_location_at_threshold,
        test_lift_two_cycle_root,
        test_forest_shape,
        test_stage_costs_chain,
        test_cfl_lift_on_random_supplier_sets,
        test_collapse_and_penalty_bounds_on_optimum,
        test_tcsd_equivalence_and_rounding,
        test_cost_lbflp_rejects_bad_solutions,
    ]
    print("🧪 Testing reduction chain...")
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
