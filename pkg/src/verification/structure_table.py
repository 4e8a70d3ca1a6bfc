# src/verification/structure_table.py
# Purpose: comparable degreewise tables and verification reports
"""StructureTable and VerificationReport, the currency of every comparison."""

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from src.core.finite_group import FinitePGroup
from src.core.verdict import CheckResult, Verdict
from src.utils.error_handler import DegreeBoundError, ErrorHandler

MODE_VERIFICATION = "verification"
MODE_CONJECTURE_PROBE = "conjecture probe"


@dataclass
class StructureTable:
    """degree -> FinitePGroup over a window, with optional bucketed pieces.

    Degrees inside the window without an entry are the zero group.
    """

    p: int
    window: Tuple[int, int]
    groups: Dict[int, FinitePGroup] = field(default_factory=dict)
    buckets: Dict[Tuple[int, Hashable], FinitePGroup] = field(default_factory=dict)

    def group(self, degree: int) -> FinitePGroup:
        low, high = self.window
        if degree > high:
            raise DegreeBoundError(f"degree {degree} outside table window {self.window}")
        if degree < low:
            return FinitePGroup.zero(self.p)
        return self.groups.get(degree, FinitePGroup.zero(self.p))

    def bucket(self, degree: int, key: Hashable) -> FinitePGroup:
        self.group(degree)
        return self.buckets.get((degree, key), FinitePGroup.zero(self.p))

    def add(self, degree: int, group: FinitePGroup, *keys: Hashable):
        self.groups[degree] = self.group(degree) + group
        for key in keys:
            self.buckets[(degree, key)] = self.bucket(degree, key) + group

    def degrees(self) -> List[int]:
        return list(range(self.window[0], self.window[1] + 1))

    def to_rows(self) -> List[dict]:
        return [
            {"degree": d, "exponents": list(self.group(d).exponents)} for d in self.degrees()
        ]


def tensor_with_free(
    table: StructureTable, generator_degrees: Sequence[int], degree: int
) -> FinitePGroup:
    """(M (x) F)_degree for F free on generators of the given degrees."""
    total = FinitePGroup.zero(table.p)
    for shift in generator_degrees:
        total = total + table.group(degree - shift)
    return total


@dataclass(frozen=True)
class ReportCell:
    degree: int
    bucket: Optional[Union[int, str]]
    lhs: Tuple[int, ...]
    rhs: Tuple[int, ...]
    verdict: Verdict
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "bucket": self.bucket,
            "lhs": list(self.lhs),
            "rhs": list(self.rhs),
            "verdict": self.verdict.value,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    """Per-cell comparison of two independently computed sides."""

    name: str
    parameters: Dict[str, object]
    window: Tuple[int, int]
    mode: str = MODE_VERIFICATION
    values: str = "exponents"
    cells: List[ReportCell] = field(default_factory=list)
    checks: List[CheckResult] = field(default_factory=list)

    def add_cell(
        self,
        degree: int,
        lhs: FinitePGroup,
        rhs: FinitePGroup,
        bucket: Optional[Union[int, str]] = None,
        verdict: Optional[Verdict] = None,
        note: str = "",
    ) -> ReportCell:
        if verdict is None:
            verdict = Verdict.of(lhs == rhs)
        return self.add_values(degree, lhs.exponents, rhs.exponents, bucket, verdict, note)

    def add_values(
        self,
        degree: int,
        lhs: Sequence[int],
        rhs: Sequence[int],
        bucket: Optional[Union[int, str]] = None,
        verdict: Optional[Verdict] = None,
        note: str = "",
    ) -> ReportCell:
        """Cell with plain integer lists on both sides (ranks, dimensions)."""
        if verdict is None:
            verdict = Verdict.of(tuple(lhs) == tuple(rhs))
        cell = ReportCell(degree, bucket, tuple(lhs), tuple(rhs), verdict, note)
        self.cells.append(cell)
        return cell

    def add_check(self, name: str, verdict: Verdict, detail: str = ""):
        self.checks.append(CheckResult(name, verdict, detail))

    def extend_checks(self, checks: Iterable[CheckResult]):
        self.checks.extend(checks)

    @property
    def verdict(self) -> Verdict:
        return Verdict.combine(
            [c.verdict for c in self.cells] + [c.verdict for c in self.checks]
        )

    def failing_cells(self) -> List[ReportCell]:
        return [c for c in self.cells if c.verdict == Verdict.FAIL]

    def log_summary(self):
        verdicts = [c.verdict for c in self.cells] + [c.verdict for c in self.checks]
        ErrorHandler.log_error_summary(
            fail_count=verdicts.count(Verdict.FAIL),
            warning_count=verdicts.count(Verdict.VACUOUS)
            + verdicts.count(Verdict.INCONCLUSIVE),
            pass_count=verdicts.count(Verdict.PASS),
            operation=f"{self.name} ({self.mode})",
        )

    def to_dict(self) -> dict:
        return {
            "kind": "report",
            "name": self.name,
            "mode": self.mode,
            "parameters": dict(self.parameters),
            "window": list(self.window),
            "values": self.values,
            "verdict": self.verdict.value,
            "cells": [c.to_dict() for c in self.cells],
            "checks": [c.to_dict() for c in self.checks],
        }
