"""
Solver configuration.

Defaults can be overridden through ``LBFL_*`` environment variables and, on the
command line, through flags (flags win over the environment).
"""

import logging
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Union

from .errors import MalformedInputError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

RationalLike = Union[Fraction, int, str]


def parse_rational(value: RationalLike, name: str = "value") -> Fraction:
    """Parse '2/3', '0.01', 3 or a Fraction exactly."""
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise MalformedInputError(f"cannot parse {name} as a rational: {value!r}") from e


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the pipeline, the CLI and the MCP server."""

    beta: Fraction = Fraction(2, 3)
    alpha_cfl: int = 9
    cfl_eps: Fraction = Fraction(1, 100)
    cfl_max_iters: int = 10_000
    oracle_max_facilities: int = 12
    oracle_max_clients: int = 10
    check_certificates: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta", parse_rational(self.beta, "beta"))
        object.__setattr__(self, "cfl_eps", parse_rational(self.cfl_eps, "cfl_eps"))
        if not Fraction(1, 2) < self.beta < 1:
            raise MalformedInputError(f"beta must lie strictly between 1/2 and 1, got {self.beta}")
        if self.cfl_eps < 0:
            raise MalformedInputError(f"cfl_eps must be nonnegative, got {self.cfl_eps}")
        if self.cfl_max_iters < 1 or self.workers < 1:
            raise MalformedInputError("cfl_max_iters and workers must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "SolverConfig":
        """Build a config from ``LBFL_*`` variables, then apply non-None overrides."""
        env = {
            "beta": os.environ.get("LBFL_BETA"),
            "alpha_cfl": os.environ.get("LBFL_ALPHA_CFL"),
            "cfl_eps": os.environ.get("LBFL_CFL_EPS"),
            "cfl_max_iters": os.environ.get("LBFL_CFL_MAX_ITERS"),
            "oracle_max_facilities": os.environ.get("LBFL_ORACLE_MAX_FACILITIES"),
            "workers": os.environ.get("LBFL_WORKERS"),
        }
        values = {}
        for key, raw in env.items():
            if raw is None:
                continue
            if key in ("beta", "cfl_eps"):
                values[key] = parse_rational(raw, key)
            else:
                try:
                    values[key] = int(raw)
                except ValueError as e:
                    raise MalformedInputError(f"LBFL_{key.upper()} must be an integer, got {raw!r}") from e
        values.update({k: v for k, v in overrides.items() if v is not None})
        config = cls(**values)
        logger.debug(f"Solver config: {config}")
        return config

    def with_overrides(self, **overrides) -> "SolverConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def setup_logging(level: Optional[str] = None) -> None:
    """Configure root logging once for an entry point."""
    level_name = (level or os.environ.get("LBFL_LOG_LEVEL") or "INFO").upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.INFO), format=LOG_FORMAT)


__all__ = ["SolverConfig", "parse_rational", "setup_logging", "LOG_FORMAT"]
