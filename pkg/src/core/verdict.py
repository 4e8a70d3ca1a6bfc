# src/core/verdict.py
# Purpose: verdict values shared by every check and report
"""Verdicts and named check results."""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable


class Verdict(str, Enum):
    """Outcome of a single check cell."""

    PASS = "PASS"
    FAIL = "FAIL"
    VACUOUS = "VACUOUS"
    INCONCLUSIVE = "INCONCLUSIVE"

    @classmethod
    def of(cls, condition: bool) -> "Verdict":
        return cls.PASS if condition else cls.FAIL

    @classmethod
    def combine(cls, verdicts: Iterable["Verdict"]) -> "Verdict":
        """FAIL dominates, then INCONCLUSIVE; PASS needs at least one PASS."""
        seen = set(verdicts)
        if cls.FAIL in seen:
            return cls.FAIL
        if cls.INCONCLUSIVE in seen:
            return cls.INCONCLUSIVE
        if cls.PASS in seen:
            return cls.PASS
        return cls.VACUOUS


@dataclass(frozen=True)
class CheckResult:
    name: str
    verdict: Verdict
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict.value, "detail": self.detail}
