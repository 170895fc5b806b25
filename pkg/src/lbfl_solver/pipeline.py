"""
End-to-end driver: LBFL → I¹ → I² → I³ → TCSD → CFL, then back up to a solution of I.

Every stage boundary records a certificate (an exact cost inequality). With
``check_certificates`` on, the first failing certificate aborts the run with a
``CertificateViolation`` naming it. When an oracle optimum is available the
driver also checks the inequalities that are stated against OPT.
"""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .cfl import CflInstance, CflSolution, eval_open_set, local_search
from .config import SolverConfig
from .core.instance import LbflInstance, LbflSolution, Number, cost_of
from .errors import DegenerateInstanceError, Infeasible, InfeasibleInstanceError, InternalConsistencyError
from .flow import TransportPlan, solve_transport
from .oracle import brute_lbfl
from .stages import (
    BetaCoveredSolution,
    CanonicalPair,
    Certificate,
    PartialSolution,
    StageI1,
    StageI2,
    StageI3,
    TcsdInstance,
    aggregate_clients,
    aggregate_facilities,
    beta_covered,
    build_cfl,
    build_penalty_instance,
    build_tcsd,
    build_ufl_instance,
    canonical_tcsd,
    canonicalize_rv,
    certify,
    collapse_cost_pair,
    cost_lbflp,
    i2_to_i3_bound,
    collapse_to_one_per_ball,
    lift_cfl_to_tcsd,
    lift_factor,
    lift_lbflp_to_i2,
    lift_tcsd_to_lbflp,
    metric_doubling_gap,
    prefix_suppliers,
    raw_choice,
    recost_down,
    tcsd_cost,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlphaLedger:
    """Approximation factors lost along the chain, innermost first."""

    beta: Fraction
    alpha_cfl: Fraction
    alpha4: Fraction
    alpha3: Fraction
    alpha2: Fraction
    alpha1: Fraction
    alpha: Fraction

    def as_dict(self) -> Dict[str, Fraction]:
        return {
            "beta": self.beta,
            "alpha_cfl": self.alpha_cfl,
            "alpha4": self.alpha4,
            "alpha3": self.alpha3,
            "alpha2": self.alpha2,
            "alpha1": self.alpha1,
            "alpha": self.alpha,
        }


def alpha_ledger(beta=Fraction(2, 3), alpha_cfl=9) -> AlphaLedger:
    """Compose the per-reduction factors for a CFL subroutine with ratio ``alpha_cfl``.

    At β = 2/3 and α_CFL = 5 this gives 20, 140, 560 and 3926.
    """
    beta = Fraction(beta)
    alpha_cfl = Fraction(alpha_cfl)
    alpha4 = 4 * alpha_cfl
    alpha3 = alpha4
    alpha2 = (2 * beta / (2 * beta - 1) + 2 / beta) * alpha3
    alpha1 = 4 * alpha2
    alpha = alpha1 * (1 + 2 / (1 - beta)) + 2 / (1 - beta)
    return AlphaLedger(beta, alpha_cfl, alpha4, alpha3, alpha2, alpha1, alpha)


@dataclass
class CertificateReport:
    beta: Fraction
    ledger: AlphaLedger
    stage_costs: Dict[str, Number] = field(default_factory=dict)
    certificates: List[Certificate] = field(default_factory=list)
    s_circ: Tuple[str, ...] = ()
    degenerate: bool = False
    cfl_iterations: int = 0
    cfl_hit_cap: bool = False
    oracle_cost: Optional[Number] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def cost(self) -> Number:
        return self.stage_costs.get("I", 0)

    @property
    def ratio(self) -> Optional[Fraction]:
        """cost / OPT; 1 when both are zero, None without an oracle value."""
        if self.oracle_cost is None:
            return None
        if self.oracle_cost == 0:
            return Fraction(1) if self.cost == 0 else None
        return Fraction(self.cost) / Fraction(self.oracle_cost)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.certificates)


@dataclass
class StageBundle:
    """Derived instances and intermediate solutions of one run, for inspection."""

    covered: Optional[BetaCoveredSolution] = None
    i1: Optional[StageI1] = None
    i2: Optional[StageI2] = None
    i3: Optional[StageI3] = None
    tcsd: Optional[TcsdInstance] = None
    canon: Optional[Mapping[int, Tuple[CanonicalPair, ...]]] = None
    cfl: Optional[CflInstance] = None
    cfl_solution: Optional[CflSolution] = None
    levels: Optional[Dict[int, int]] = None
    plan: Optional[TransportPlan] = None
    partial: Optional[PartialSolution] = None


@dataclass
class PipelineRun:
    solution: LbflSolution
    report: CertificateReport
    bundle: StageBundle


@contextmanager
def _timed(timings: Dict[str, float], name: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = time.perf_counter() - start


def _check_feasible(instance: LbflInstance) -> None:
    if instance.n and all(instance.bound(i) > instance.n for i in range(instance.m)):
        raise InfeasibleInstanceError(
            f"every facility needs more than the {instance.n} available client(s)", stage="input")


def _solve_degenerate(instance: LbflInstance, i1: StageI1) -> LbflSolution:
    """Single stage-1 location: every client already sits on one point of I¹."""
    base = i1.base
    (v,) = i1.s_circ
    if base.bound(v) <= base.n:
        chosen = v
    else:
        logger.warning(f"Stage-1 location {base.facilities[v].id} cannot be opened alone, "
                       f"falling back to the cheapest single facility")
        openable = [i for i in range(base.m) if base.bound(i) <= base.n]
        chosen = min(openable, key=lambda i: (base.cost(i) + base.n * base.d(v, i), i))
    return LbflSolution(frozenset({chosen}), (chosen,) * base.n)


def run_pipeline(instance: LbflInstance, config: Optional[SolverConfig] = None,
                 oracle: bool = False) -> PipelineRun:
    """Run every reduction and lift on ``instance``.

    Args:
        instance: a validated LBFL instance.
        config: solver knobs; defaults to ``SolverConfig()``.
        oracle: also solve the instance exactly and check the OPT-relative bounds.

    Returns:
        The final solution of the original instance, its report and the stage bundle.

    Raises:
        InfeasibleInstanceError: the instance has no feasible solution.
        SizeGuardError: ``oracle`` is set but the instance is too large for it.
        CertificateViolation: a stage inequality fails (a bug).
    """
    config = config or SolverConfig()
    enforce = config.check_certificates
    ledger = alpha_ledger(config.beta, config.alpha_cfl)
    report = CertificateReport(config.beta, ledger)
    bundle = StageBundle()
    timings = report.timings

    _check_feasible(instance)
    logger.info(f"Solving LBFL instance: |F|={instance.m}, |C|={instance.n}, beta={config.beta}")

    opt: Optional[LbflSolution] = None
    if oracle:
        with _timed(timings, "oracle"):
            result = brute_lbfl(instance, config.oracle_max_facilities, config.oracle_max_clients)
        if isinstance(result, Infeasible):
            raise InfeasibleInstanceError(result.reason, stage="oracle")
        opt, report.oracle_cost = result

    if instance.n == 0:
        report.degenerate = True
        report.stage_costs["I"] = 0
        return PipelineRun(LbflSolution(frozenset(), ()), report, bundle)

    with _timed(timings, "stage1"):
        covered = beta_covered(instance, config.beta)
    bundle.covered = covered
    report.s_circ = tuple(instance.facilities[v].id for v in sorted(covered.s_circ))
    report.stage_costs["bicriteria"] = cost_of(instance, covered.as_solution()).total

    with _timed(timings, "aggregate_clients"):
        i1 = aggregate_clients(instance, covered)
    bundle.i1 = i1

    try:
        with _timed(timings, "aggregate_facilities"):
            i2 = aggregate_facilities(i1)
    except DegenerateInstanceError as e:
        logger.warning(f"Degenerate stage 1 ({e}); solving I¹ directly")
        report.degenerate = True
        solution = _solve_degenerate(instance, i1)
        cost_1 = cost_of(i1.base, solution).total
        cost_0 = cost_of(instance, solution).total
        report.stage_costs.update({"I1": cost_1, "I": cost_0})
        report.certificates.append(
            certify("I1-to-I recost", cost_0, cost_1, 1, report.stage_costs["bicriteria"], enforce=enforce))
        _oracle_checks(instance, opt, report, None, None, enforce)
        return PipelineRun(solution, report, bundle)
    bundle.i2 = i2
    report.certificates.append(certify("metric doubling", metric_doubling_gap(i2), 0, enforce=enforce))

    with _timed(timings, "build_reductions"):
        i3 = build_penalty_instance(i2)
        t = build_tcsd(i3)
        canon = canonicalize_rv(t)
        labels = {v: instance.facilities[v].id for v in t.locations}
        cfl = build_cfl(canon, t, labels)
    bundle.i3, bundle.tcsd, bundle.canon, bundle.cfl = i3, t, canon, cfl

    with _timed(timings, "cfl_local_search"):
        cfl_solution = local_search(cfl, config.cfl_eps, config.cfl_max_iters, config.workers)
    bundle.cfl_solution = cfl_solution
    report.cfl_iterations = cfl_solution.iterations
    report.cfl_hit_cap = cfl_solution.hit_iteration_cap
    report.stage_costs["I5"] = cfl_solution.cost

    with _timed(timings, "lift"):
        levels = lift_cfl_to_tcsd(canon, cfl, cfl_solution)
        canonical = tcsd_cost(canonical_tcsd(t, canon), levels)
        if isinstance(canonical, Infeasible):
            raise InternalConsistencyError(f"lifted CFL solution is not a feasible TCSD choice: {canonical.reason}")
        report.stage_costs["I4_canonical"] = canonical.total
        report.certificates.append(certify("I5-to-I4 lift", canonical.total, cfl_solution.cost, enforce=enforce))

        realized = eval_open_set(cfl, prefix_suppliers(cfl, levels))
        if isinstance(realized, Infeasible):
            raise InternalConsistencyError(f"prefix realization is infeasible: {realized.reason}")
        report.certificates.append(
            certify("I4-to-I5 realization", realized.cost, canonical.total, 2, enforce=enforce))

        choice = raw_choice(canon, levels)
        raw = tcsd_cost(t, choice)
        report.stage_costs["I4"] = raw.total
        report.certificates.append(certify("power-of-two rounding", raw.total, canonical.total, enforce=enforce))

        plan = solve_transport(t.problem(choice))
        partial = lift_tcsd_to_lbflp(t, i3, choice, plan)
        cost_3 = cost_lbflp(i3, partial).total
        report.stage_costs["I3"] = cost_3

        solution = lift_lbflp_to_i2(i3, partial, check=False)
        recosting = recost_down(instance, i1, i2, solution, enforce=enforce)
    bundle.levels, bundle.plan, bundle.partial = levels, plan, partial

    report.stage_costs.update({"I2": recosting.i2.total, "I1": recosting.i1.total, "I": recosting.original.total})
    report.certificates.append(
        certify("I3-to-I2 lift", recosting.i2.total, cost_3, lift_factor(config.beta), enforce=enforce))
    report.certificates.extend(recosting.certificates)

    _oracle_checks(instance, opt, report, i2, i3, enforce)
    logger.info(f"Pipeline cost {report.cost} with {len(solution.open)} open facilit"
                f"{'y' if len(solution.open) == 1 else 'ies'}")
    return PipelineRun(solution, report, bundle)


def _oracle_checks(instance: LbflInstance, opt: Optional[LbflSolution], report: CertificateReport,
                   i2: Optional[StageI2], i3: Optional[StageI3], enforce: bool) -> None:
    if opt is None:
        return
    beta = report.beta
    opt_cost = report.oracle_cost
    report.certificates.append(certify("end-to-end ratio", report.cost, opt_cost, report.ledger.alpha,
                                       enforce=enforce))
    report.certificates.append(certify("bi-criteria", report.stage_costs["bicriteria"], opt_cost,
                                       2 / (1 - beta), enforce=enforce))

    aug = build_ufl_instance(instance, beta)
    f_prime = sum((aug.f_prime[i] for i in opt.open), Fraction(0))
    ccost = sum(instance.fc(i, j) for j, i in enumerate(opt.assign))
    opening = sum((Fraction(instance.cost(i)) for i in opt.open), Fraction(0))
    report.certificates.append(certify("f-prime bound", f_prime, ccost, aug.coefficient, opening,
                                       enforce=enforce))

    if i2 is None:
        return
    collapsed_cost, opt_cost_1 = collapse_cost_pair(i2, opt)
    report.certificates.append(certify("I1-to-I2 collapse", collapsed_cost, opt_cost_1, Fraction(8, 3),
                                       enforce=enforce))
    report.certificates.append(i2_to_i3_bound(i3, collapse_to_one_per_ball(i2, opt), enforce=enforce))


def pipeline_solve(instance: LbflInstance, config: Optional[SolverConfig] = None,
                   oracle: bool = False) -> Tuple[LbflSolution, CertificateReport]:
    run = run_pipeline(instance, config, oracle)
    return run.solution, run.report


__all__ = [
    "AlphaLedger",
    "alpha_ledger",
    "CertificateReport",
    "StageBundle",
    "PipelineRun",
    "run_pipeline",
    "pipeline_solve",
]
