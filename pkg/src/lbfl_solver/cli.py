#!/usr/bin/env python3
"""
Command line interface: ``lbfl gen | solve | oracle | check | bench``.

Exit codes: 0 success, 2 infeasible instance (or a rejected solution for
``check``), 3 certificate violation, 4 malformed input or an oversized oracle run.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .bench import run_bench
from .config import SolverConfig, setup_logging
from .core.generator import PROFILES, generate_instance, get_profile
from .core.instance import check_solution
from .core.io import instance_to_dict, load_instance, load_solution, solution_to_dict
from .errors import Infeasible, LbflError, MalformedInputError
from .oracle import brute_lbfl
from .pipeline import run_pipeline
from .reporting import bundle_to_dict, money, render_table, report_table, solve_result, to_json

logger = logging.getLogger(__name__)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _seed_range(value: str) -> range:
    """'7' → [7], '0:200' → 0..199."""
    try:
        if ":" in value:
            lo, hi = value.split(":", 1)
            return range(int(lo), int(hi))
        return range(int(value), int(value) + 1)
    except ValueError:
        raise MalformedInputError(f"bad seed range {value!r}, expected N or LO:HI")


def _config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig.from_env(
        beta=getattr(args, "beta", None),
        cfl_eps=getattr(args, "cfl_eps", None),
        cfl_max_iters=getattr(args, "cfl_max_iters", None),
        workers=getattr(args, "workers", None),
    )


def cmd_gen(args: argparse.Namespace) -> int:
    instance = generate_instance(args.seed, get_profile(args.profile))
    _emit(to_json(instance_to_dict(instance)), args.out)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    run = run_pipeline(instance, _config(args), oracle=args.oracle)
    if args.emit_stages:
        Path(args.emit_stages).write_text(to_json(bundle_to_dict(instance, run.bundle, run.report)), encoding="utf-8")
        logger.info(f"Wrote stage dump to {args.emit_stages}")
    if args.table:
        _emit(report_table(run.report, instance.scale), args.out)
    else:
        _emit(to_json(solve_result(instance, run.solution, run.report, args.timings)), args.out)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    config = _config(args)
    result = brute_lbfl(instance, config.oracle_max_facilities, config.oracle_max_clients)
    if isinstance(result, Infeasible):
        logger.error(f"No feasible solution: {result.reason}")
        _emit(to_json({"feasible": False, "reason": result.reason}), args.out)
        return 2
    solution, cost = result
    _emit(to_json({"feasible": True, "solution": solution_to_dict(instance, solution),
                   "cost": money(cost, instance.scale)}), args.out)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    record = load_solution(args.solution)
    verdict = check_solution(instance, record.open, record.assign)
    payload = {"feasible": verdict.feasible, "issues": list(verdict.issues)}
    if verdict.cost is not None:
        payload["cost"] = {
            "facility": money(verdict.cost.facility_cost, instance.scale),
            "connection": money(verdict.cost.connection_cost, instance.scale),
            "total": money(verdict.cost.total, instance.scale),
        }
    _emit(to_json(payload), args.out)
    for issue in verdict.issues:
        logger.warning(issue)
    return 0 if verdict.feasible else 2


def cmd_bench(args: argparse.Namespace) -> int:
    result = run_bench(_seed_range(args.seeds), get_profile(args.profile), _config(args),
                       oracle=not args.no_oracle, timings=args.timings, workers=args.workers or 1)
    if args.table:
        rows = [(r["seed"], r["facilities"], r["clients"], r["status"],
                 r["cost"]["exact"] if r.get("cost") else "",
                 r["optimum"]["exact"] if r.get("optimum") else "",
                 f"{r['ratio']['value']:.4f}" if r.get("ratio") else "")
                for r in result["rows"]]
        text = render_table(rows, ("seed", "|F|", "|C|", "status", "cost", "optimum", "ratio"))
        summary = result["summary"]
        text += f"\n{summary['solved']}/{summary['instances']} solved, {summary['compared']} compared"
        if summary["max_ratio"]:
            text += f", max ratio {summary['max_ratio']['value']:.4f}, mean {summary['mean_ratio']['value']:.4f}"
        _emit(text + "\n", args.out)
    else:
        _emit(to_json(result), args.out)
    return 0 if result["summary"]["certificates_hold"] else 3


def _add_solver_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", help="coverage parameter in (1/2, 1), e.g. 2/3")
    parser.add_argument("--cfl-eps", dest="cfl_eps", help="local search improvement threshold, e.g. 1/100")
    parser.add_argument("--cfl-max-iters", dest="cfl_max_iters", type=int, help="local search move cap")
    parser.add_argument("--workers", type=int, help="threads for move pricing / bench instances")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lbfl", description="Lower-bounded facility location solver")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser("gen", help="Generate a seeded random instance.")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--profile", default="suite", choices=sorted(PROFILES))
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    solve = subparsers.add_parser("solve", help="Run the reduction pipeline on an instance file.")
    solve.add_argument("instance")
    _add_solver_args(solve)
    solve.add_argument("--oracle", action="store_true", help="also compare against the exact optimum")
    solve.add_argument("--emit-stages", dest="emit_stages", help="write every derived stage to this JSON file")
    solve.add_argument("--timings", action="store_true", help="include per-stage wall-clock timings")
    solve.add_argument("--table", action="store_true", help="print a text table instead of JSON")
    solve.add_argument("--out")
    solve.set_defaults(func=cmd_solve)

    oracle = subparsers.add_parser("oracle", help="Solve a small instance exactly by enumeration.")
    oracle.add_argument("instance")
    oracle.add_argument("--out")
    oracle.set_defaults(func=cmd_oracle)

    check = subparsers.add_parser("check", help="Validate a solution file against an instance.")
    check.add_argument("instance")
    check.add_argument("solution")
    check.add_argument("--out")
    check.set_defaults(func=cmd_check)

    bench = subparsers.add_parser("bench", help="Benchmark the pipeline over a seeded suite.")
    bench.add_argument("--seeds", default="0:200", help="N or LO:HI (HI exclusive)")
    bench.add_argument("--profile", default="suite", choices=sorted(PROFILES))
    _add_solver_args(bench)
    bench.add_argument("--no-oracle", dest="no_oracle", action="store_true")
    bench.add_argument("--timings", action="store_true")
    bench.add_argument("--table", action="store_true")
    bench.add_argument("--out")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging("DEBUG" if args.verbose else None)
    try:
        return int(args.func(args))
    except LbflError as e:
        logger.error(f"❌ {args.command} failed: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
