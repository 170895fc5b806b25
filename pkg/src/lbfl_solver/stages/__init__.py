"""
The reduction chain: bi-criteria stage, I¹ … I⁵ builders and the lifts back down.
"""

from .certificates import Certificate, certify
from .ufl_stage import (
    UflAugmented,
    BetaCoveredSolution,
    build_ufl_instance,
    jms_solve,
    prune_by_closing,
    beta_covered,
    f_prime_bound_holds,
)
from .aggregation import (
    StageI1,
    StageI2,
    aggregate_clients,
    aggregate_facilities,
    metric_doubling_gap,
    outside_balls_are_far,
    collapse_to_one_per_ball,
    collapse_cost_pair,
)
from .penalty import (
    StageI3,
    PartialSolution,
    MovingState,
    penalty_coefficient,
    build_penalty_instance,
    cost_lbflp,
    full_solution_penalty_cost,
    i2_to_i3_factor,
    lift_factor,
    i2_to_i3_bound,
    build_moving_state,
    lift_lbflp_to_i2,
)
from .tcsd import (
    RvPair,
    TcsdInstance,
    CanonicalPair,
    build_tcsd,
    tcsd_cost,
    round_up_power_of_two,
    canonicalize_rv,
    canonical_tcsd,
    raw_choice,
    lift_tcsd_to_lbflp,
)
from .cfl_reduction import build_cfl, lift_cfl_to_tcsd, prefix_suppliers
from .recost import Recosting, recost_down

__all__ = [
    "Certificate",
    "certify",
    "UflAugmented",
    "BetaCoveredSolution",
    "build_ufl_instance",
    "jms_solve",
    "prune_by_closing",
    "beta_covered",
    "f_prime_bound_holds",
    "StageI1",
    "StageI2",
    "aggregate_clients",
    "aggregate_facilities",
    "metric_doubling_gap",
    "outside_balls_are_far",
    "collapse_to_one_per_ball",
    "collapse_cost_pair",
    "StageI3",
    "PartialSolution",
    "MovingState",
    "penalty_coefficient",
    "build_penalty_instance",
    "cost_lbflp",
    "full_solution_penalty_cost",
    "i2_to_i3_factor",
    "lift_factor",
    "i2_to_i3_bound",
    "build_moving_state",
    "lift_lbflp_to_i2",
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
    "build_cfl",
    "lift_cfl_to_tcsd",
    "prefix_suppliers",
    "Recosting",
    "recost_down",
]
