"""
JSON and text rendering of solve reports, bench results and stage dumps.

Costs are written twice: exactly in scaled units (``"17"`` or ``"35/2"``) and
unscaled as a float. JSON keys are sorted so equal inputs give equal bytes.
"""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .core.instance import LbflInstance, LbflSolution, Number, format_exact, unscaled
from .core.io import solution_to_dict
from .pipeline import CertificateReport, StageBundle
from .stages.certificates import Certificate

logger = logging.getLogger(__name__)


def money(value: Optional[Number], scale: int = 1) -> Optional[Dict[str, Any]]:
    if value is None:
        return None
    return {"exact": format_exact(value), "value": unscaled(value, scale)}


def ratio_value(value: Optional[Fraction]) -> Optional[Dict[str, Any]]:
    if value is None:
        return None
    return {"exact": format_exact(value), "value": float(value)}


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _certificate(cert: Certificate) -> Dict[str, Any]:
    return {"name": cert.name, "lhs": format_exact(cert.lhs), "rhs": format_exact(cert.rhs),
            "factor": format_exact(cert.factor), "holds": cert.holds}


def report_to_dict(report: CertificateReport, scale: int = 1, include_timings: bool = False) -> Dict[str, Any]:
    payload = {
        "beta": format_exact(report.beta),
        "ledger": {k: format_exact(v) for k, v in report.ledger.as_dict().items()},
        "stage_costs": {k: money(v, scale) for k, v in report.stage_costs.items()},
        "certificates": [_certificate(c) for c in report.certificates],
        "s_circ": list(report.s_circ),
        "degenerate": report.degenerate,
        "cfl_iterations": report.cfl_iterations,
        "cfl_hit_cap": report.cfl_hit_cap,
        "oracle_cost": money(report.oracle_cost, scale),
        "ratio": ratio_value(report.ratio),
    }
    if include_timings:
        payload["timings"] = {k: round(v, 6) for k, v in report.timings.items()}
    return payload


def solve_result(instance: LbflInstance, solution: LbflSolution, report: CertificateReport,
                 include_timings: bool = False) -> Dict[str, Any]:
    """The document written by ``lbfl solve``: the solution plus its report."""
    return {
        "solution": solution_to_dict(instance, solution),
        "cost": money(report.cost, instance.scale),
        "report": report_to_dict(report, instance.scale, include_timings),
    }


def render_table(rows: Sequence[Sequence[Any]], headers: Sequence[str]) -> str:
    """Left-aligned text table with a dashed rule under the header."""
    cells = [[str(h) for h in headers]] + [["" if c is None else str(c) for c in row] for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def report_table(report: CertificateReport, scale: int = 1) -> str:
    stage_rows = [(name, format_exact(v), f"{unscaled(v, scale):.4f}") for name, v in report.stage_costs.items()]
    text = render_table(stage_rows, ("stage", "cost (scaled)", "cost"))
    if report.certificates:
        cert_rows = [(c.name, format_exact(c.lhs), format_exact(c.rhs), "ok" if c.holds else "FAIL")
                     for c in report.certificates]
        text += "\n" + render_table(cert_rows, ("certificate", "lhs", "rhs", "status"))
    if report.ratio is not None:
        text += f"\nratio to optimum: {float(report.ratio):.4f} (bound {format_exact(report.ledger.alpha)})\n"
    return text


def _stage_instance(instance: LbflInstance) -> Dict[str, Any]:
    return {
        "facilities": [{"id": f.id, "cost": format_exact(f.cost), "lower_bound": f.lower_bound}
                       for f in instance.facilities],
        "clients": list(instance.clients),
        "dist": [list(row) for row in instance.dist],
    }


def _names(instance: LbflInstance, indices: Iterable[int]) -> List[str]:
    return [instance.facilities[i].id for i in sorted(indices)]


def bundle_to_dict(instance: LbflInstance, bundle: StageBundle,
                   report: Optional[CertificateReport] = None) -> Dict[str, Any]:
    """Everything ``--emit-stages`` writes: derived instances, choices, plans by id and the certificates."""
    name = lambda i: instance.facilities[i].id  # noqa: E731
    payload: Dict[str, Any] = {"scale": instance.scale}
    if bundle.covered is not None:
        payload["stage1"] = {
            "s_circ": _names(instance, bundle.covered.s_circ),
            "assign": {instance.clients[j]: name(v) for j, v in enumerate(bundle.covered.sigma_circ)},
        }
    if bundle.i1 is not None:
        payload["I1"] = _stage_instance(bundle.i1.base)
    if bundle.i2 is not None:
        payload["I2"] = _stage_instance(bundle.i2.base)
        payload["I2"]["radius"] = {name(v): r for v, r in sorted(bundle.i2.ell.items())}
        payload["I2"]["balls"] = {name(v): _names(instance, ball) for v, ball in sorted(bundle.i2.N.items())}
    if bundle.i3 is not None:
        payload["I3"] = {
            "penalty_coefficient": format_exact(bundle.i3.penalty_coeff),
            "penalties": {name(v): format_exact(bundle.i3.penalty(v)) for v in bundle.i3.locations},
        }
    if bundle.tcsd is not None:
        payload["I4"] = {
            name(v): [{"g": format_exact(p.g), "z": p.z, "facility": None if p.is_penalty else name(p.facility)}
                      for p in pairs]
            for v, pairs in bundle.tcsd.R.items()
        }
    if bundle.canon is not None:
        payload["I4_canonical"] = {
            name(v): [{"h": format_exact(p.h), "y": p.y, "raw_index": p.raw_index} for p in pairs]
            for v, pairs in bundle.canon.items()
        }
    if bundle.cfl is not None:
        cfl = bundle.cfl
        payload["I5"] = {
            "demand": {name(v): units for v, units in sorted(cfl.demand.items())},
            "suppliers": [{"id": s.id, "location": name(s.location), "cost": format_exact(s.cost),
                           "capacity": s.capacity} for s in cfl.suppliers],
        }
    if bundle.cfl_solution is not None:
        payload["cfl_solution"] = {
            "open": list(bundle.cfl_solution.open_ids(bundle.cfl)),
            "cost": format_exact(bundle.cfl_solution.cost),
            "iterations": bundle.cfl_solution.iterations,
        }
    if bundle.levels is not None:
        payload["levels"] = {name(v): level for v, level in sorted(bundle.levels.items())}
    if bundle.plan is not None:
        payload["transport"] = [{"from": name(u), "to": name(w), "units": units}
                                for (u, w), units in sorted(bundle.plan.flow.items())]
    if bundle.partial is not None:
        payload["I3_solution"] = {
            "open": _names(instance, bundle.partial.open),
            "assign": {instance.clients[j]: None if i is None else name(i)
                       for j, i in enumerate(bundle.partial.assign)},
        }
    if report is not None:
        payload["certificates"] = [_certificate(c) for c in report.certificates]
    return payload


__all__ = [
    "money",
    "ratio_value",
    "to_json",
    "report_to_dict",
    "solve_result",
    "render_table",
    "report_table",
    "bundle_to_dict",
]
