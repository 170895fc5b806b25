"""
JSON file formats for instances and solutions.

Instance file::

    {"scale": 1,
     "facilities": [{"id": "a", "cost": 1, "lower_bound": 1}, ...],
     "clients": [{"id": "c1"}, ...],
     "dist": [[...], ...]}            # full matrix over facilities then clients
    or "points": [[x, y], ...] with "norm": "l1" | "euclidean" instead of "dist"

Solution file::

    {"open": ["a", "b"], "assign": {"c1": "a", ...}}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, ValidationError, model_validator

from ..errors import MalformedInputError, MetricViolationError
from .generator import induced_metric
from .instance import Facility, LbflInstance, LbflSolution, validate_metric

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class FacilityRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    cost: NonNegativeInt
    lower_bound: NonNegativeInt = 0


class ClientRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str


class InstanceFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scale: int = Field(default=1, ge=1)
    facilities: List[FacilityRecord] = Field(default_factory=list)
    clients: List[ClientRecord] = Field(default_factory=list)
    points: Optional[List[List[int]]] = None
    norm: Literal["l1", "euclidean"] = "l1"
    dist: Optional[List[List[NonNegativeInt]]] = None

    @model_validator(mode="after")
    def _one_metric_source(self) -> "InstanceFile":
        if (self.points is None) == (self.dist is None):
            raise ValueError("exactly one of 'points' or 'dist' is required")
        size = len(self.facilities) + len(self.clients)
        rows = self.points if self.points is not None else self.dist
        if len(rows) != size:
            raise ValueError(f"expected {size} rows in metric data, got {len(rows)}")
        if self.dist is not None and any(len(row) != size for row in self.dist):
            raise ValueError(f"'dist' must be a {size}x{size} matrix")
        if self.points is not None and len({len(p) for p in self.points}) > 1:
            raise ValueError("all points must have the same dimension")
        return self


class SolutionFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    open: List[str] = Field(default_factory=list)
    assign: Dict[str, str] = Field(default_factory=dict)


def _describe(error: ValidationError) -> str:
    parts = []
    for err in error.errors():
        loc = ".".join(str(x) for x in err.get("loc", ())) or "<root>"
        parts.append(f"{loc}: {err.get('msg')}")
    return "; ".join(parts)


def _record_to_instance(record: InstanceFile) -> LbflInstance:
    if record.dist is not None:
        dist = record.dist
    elif record.points:
        dist = induced_metric(np.array(record.points, dtype=np.int64), record.norm).tolist()
    else:
        dist = []
    violations = validate_metric(dist)
    if violations:
        raise MetricViolationError(violations)
    facilities = tuple(Facility(f.id, f.cost, f.lower_bound) for f in record.facilities)
    clients = tuple(c.id for c in record.clients)
    return LbflInstance(facilities, clients, dist, record.scale)


def instance_from_dict(payload: Dict[str, Any]) -> LbflInstance:
    """Validate a decoded instance document and build the instance.

    Raises:
        MalformedInputError: schema problems, with field locations.
        MetricViolationError: the metric fails ``validate_metric``.
    """
    try:
        record = InstanceFile.model_validate(payload)
    except ValidationError as e:
        raise MalformedInputError("invalid instance", context=_describe(e)) from e
    return _record_to_instance(record)


def instance_to_dict(instance: LbflInstance) -> Dict[str, Any]:
    for f in instance.facilities:
        if int(f.cost) != f.cost:
            raise MalformedInputError(f"facility {f.id} has non-integer cost {f.cost}; use a stage dump instead")
    return {
        "scale": instance.scale,
        "facilities": [{"id": f.id, "cost": int(f.cost), "lower_bound": f.lower_bound}
                       for f in instance.facilities],
        "clients": [{"id": c} for c in instance.clients],
        "dist": [list(row) for row in instance.dist],
    }


def load_instance(path: PathLike) -> LbflInstance:
    """Load and validate an instance file.

    Raises:
        MalformedInputError: unreadable file, bad JSON (with line/column) or bad fields.
        MetricViolationError: the metric is not a pseudometric.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MalformedInputError(f"cannot read instance file: {e}", context=str(path)) from e
    try:
        record = InstanceFile.model_validate_json(text)
    except ValidationError as e:
        raise MalformedInputError("invalid instance file", context=f"{path}: {_describe(e)}") from e
    instance = _record_to_instance(record)
    logger.info(f"Loaded instance {path.name}: |F|={instance.m}, |C|={instance.n}")
    return instance


def save_instance(instance: LbflInstance, path: PathLike) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n", encoding="utf-8")


def solution_to_dict(instance: LbflInstance, sol: LbflSolution) -> Dict[str, Any]:
    return {
        "open": sorted(instance.facilities[i].id for i in sol.open),
        "assign": {instance.clients[j]: instance.facilities[i].id for j, i in enumerate(sol.assign)},
    }


def solution_from_dict(payload: Dict[str, Any]) -> SolutionFile:
    try:
        return SolutionFile.model_validate(payload)
    except ValidationError as e:
        raise MalformedInputError("invalid solution", context=_describe(e)) from e


def load_solution(path: PathLike) -> SolutionFile:
    """Load a solution file by ids; resolution against an instance happens in ``check_solution``."""
    path = Path(path)
    try:
        return SolutionFile.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise MalformedInputError(f"cannot read solution file: {e}", context=str(path)) from e
    except ValidationError as e:
        raise MalformedInputError("invalid solution file", context=f"{path}: {_describe(e)}") from e


def save_solution(instance: LbflInstance, sol: LbflSolution, path: PathLike) -> None:
    Path(path).write_text(json.dumps(solution_to_dict(instance, sol), indent=2) + "\n", encoding="utf-8")


__all__ = [
    "FacilityRecord",
    "ClientRecord",
    "InstanceFile",
    "SolutionFile",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "save_instance",
    "solution_to_dict",
    "solution_from_dict",
    "load_solution",
    "save_solution",
]
