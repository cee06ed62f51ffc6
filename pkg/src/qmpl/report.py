"""Structured outcome of one identity check."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

from .scalar import Scalar

EXACT_ZERO = "exact-zero"


class Verdict(str, enum.Enum):
    EXACT_PASS = "ExactPass"
    TOLERANCE_PASS = "TolerancePass"
    FAIL = "Fail"
    UNSUPPORTED = "Unsupported"


@dataclass(frozen=True)
class VerificationReport:
    relation_id: str
    parameters: dict[str, Any]
    lhs: str | None
    rhs: str | None
    deviation: float
    exact_zero: bool
    tail_budget: float
    verdict: Verdict
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict in (Verdict.EXACT_PASS, Verdict.TOLERANCE_PASS)

    def to_dict(self) -> dict[str, Any]:
        return {
            "relation_id": self.relation_id,
            "parameters": self.parameters,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deviation": EXACT_ZERO if self.exact_zero else _json_float(self.deviation),
            "tail_budget": _json_float(self.tail_budget),
            "verdict": self.verdict.value,
            "details": self.details,
        }


def _json_float(x: float):
    if math.isinf(x):
        return "unbounded"
    return x


def rounding_budget(prec: int | None, scale: float, ops: int) -> float:
    """Generous allowance for accumulated rounding: ``16 * ops * scale * 2**-prec``."""
    if prec is None:
        return 0.0
    return 16.0 * max(ops, 1) * max(scale, 1e-300) * 2.0 ** (-prec)


def compare(
    relation_id: str,
    parameters: dict[str, Any],
    lhs: Scalar,
    rhs: Scalar,
    tail_budget: float = 0.0,
    details: dict[str, Any] | None = None,
    *,
    exact_required: bool = True,
) -> VerificationReport:
    """Compare two evaluated sides.

    In exact mode a zero difference is an ``ExactPass``; a nonzero one fails
    unless ``exact_required`` is False and it fits the budget.  Floating results
    can only earn a ``TolerancePass``.
    """
    diff = lhs - rhs
    exact = lhs.mode.value == "exact"
    zero = exact and diff.is_zero()
    deviation = 0.0 if zero else diff.magnitude()
    if zero:
        verdict = Verdict.EXACT_PASS
    elif exact and exact_required:
        verdict = Verdict.FAIL
    else:
        verdict = Verdict.TOLERANCE_PASS if deviation <= tail_budget else Verdict.FAIL
    return VerificationReport(
        relation_id=relation_id,
        parameters=parameters,
        lhs=str(lhs),
        rhs=str(rhs),
        deviation=deviation,
        exact_zero=zero,
        tail_budget=tail_budget,
        verdict=verdict,
        details=details or {},
    )
