"""Structured check outcomes and the aggregated smoothness certificate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

PASS = "PASS"
FAIL = "FAIL"
NOT_APPLICABLE = "NOT-APPLICABLE"

VERDICT_SMOOTH_CANDIDATE = "DIFFERENTIALLY-SMOOTH-CANDIDATE"
VERDICT_OBSTRUCTED = "NOT-SMOOTH-BY-OBSTRUCTION"
VERDICT_MIXED = "MIXED"


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification step.

    FAIL always carries a witness that re-verifies; NOT-APPLICABLE always
    carries a reason inside ``details['reason']``.  ``elapsed_ms`` is kept
    out of the canonical JSON so reports stay byte-identical across runs.
    """

    check_id: str
    status: str
    witness: Optional[dict] = None
    assumptions: tuple = ()
    details: dict = field(default_factory=dict)
    elapsed_ms: Optional[float] = None

    def __post_init__(self):
        if self.status not in (PASS, FAIL, NOT_APPLICABLE):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise ValueError("FAIL reports must carry a witness")
        if self.status == NOT_APPLICABLE and "reason" not in self.details:
            raise ValueError("NOT-APPLICABLE reports must carry a reason")

    def as_json(self, include_timing: bool = False) -> dict:
        out = {"id": self.check_id, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.assumptions:
            out["assumptions"] = list(self.assumptions)
        if self.details:
            out["details"] = self.details
        if include_timing and self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass(frozen=True)
class SmoothnessCertificate:
    """Ordered check reports plus the aggregate verdict."""

    presentation: str
    checks: tuple
    verdict: str
    warnings: tuple = ()
    degrees: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    @property
    def any_fail(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    def check(self, check_id: str) -> CheckReport:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def as_json(self, include_timing: bool = False) -> dict:
        out = {
            "presentation": self.presentation,
            "degrees": self.degrees,
            "checks": [c.as_json(include_timing) for c in self.checks],
            "verdict": self.verdict,
        }
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out
