"""
Per-stage cost inequalities, recorded for the report and raised when they fail.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from ..core.instance import Number
from ..errors import CertificateViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Certificate:
    """``lhs ≤ rhs``; ``rhs`` already includes the factor."""

    name: str
    lhs: Number
    rhs: Number
    factor: Number = 1

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def certify(name: str, lhs: Number, base: Number, factor: Number = 1, additive: Number = 0,
            enforce: bool = True) -> Certificate:
    """Check ``lhs ≤ factor·base + additive`` exactly.

    Raises:
        CertificateViolation: the inequality fails and ``enforce`` is set.
    """
    rhs = Fraction(factor) * Fraction(base) + Fraction(additive)
    cert = Certificate(name, Fraction(lhs), rhs, Fraction(factor))
    if not cert.holds:
        if enforce:
            raise CertificateViolation(name, cert.lhs, cert.rhs)
        logger.warning(f"Certificate '{name}' failed: {cert.lhs} > {cert.rhs}")
    else:
        logger.debug(f"Certificate '{name}': {cert.lhs} <= {cert.rhs}")
    return cert


__all__ = ["Certificate", "certify"]
