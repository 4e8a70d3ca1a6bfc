# src/core/finite_group.py
# Purpose: isomorphism types of finitely generated Z_(p)-modules
"""Finitely generated abelian p-groups as exponent multisets.

A FinitePGroup with exponents (e_1, ..., e_r) and free rank f stands for
Z/p^{e_1} + ... + Z/p^{e_r} + Z_(p)^f. It is the comparison currency of
every homology, Tor and structure computation in the engine.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple


@dataclass(frozen=True)
class FinitePGroup:
    """Isomorphism type of a finitely generated Z_(p)-module."""

    p: int
    exponents: Tuple[int, ...] = field(default_factory=tuple)
    free_rank: int = 0

    def __post_init__(self):
        cleaned = tuple(sorted(int(e) for e in self.exponents if e != 0))
        if any(e < 0 for e in cleaned):
            raise ValueError(f"negative exponent in {self.exponents}")
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        object.__setattr__(self, "exponents", cleaned)

    @classmethod
    def zero(cls, p: int) -> "FinitePGroup":
        return cls(p)

    @classmethod
    def cyclic(cls, p: int, exponent: int) -> "FinitePGroup":
        """Z/p^exponent."""
        return cls(p, (exponent,))

    @property
    def is_zero(self) -> bool:
        return not self.exponents and self.free_rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def log_order(self) -> Optional[int]:
        """Sum of exponents, i.e. log_p of the order; None when infinite."""
        if self.free_rank:
            return None
        return sum(self.exponents)

    @property
    def order(self) -> Optional[int]:
        """Group order p^{sum e_i}; None when the free rank is positive."""
        log_order = self.log_order
        return None if log_order is None else self.p**log_order

    def direct_sum(self, other: "FinitePGroup") -> "FinitePGroup":
        if other.p != self.p:
            raise ValueError(f"cannot add a {other.p}-group to a {self.p}-group")
        return FinitePGroup(
            self.p, self.exponents + other.exponents, self.free_rank + other.free_rank
        )

    def __add__(self, other: "FinitePGroup") -> "FinitePGroup":
        return self.direct_sum(other)

    def repeated(self, times: int) -> "FinitePGroup":
        """Direct sum of `times` copies."""
        return FinitePGroup(self.p, self.exponents * times, self.free_rank * times)

    def invariant_factors(self) -> List[int]:
        """Orders p^{e_i} of the cyclic summands, ascending."""
        return [self.p**e for e in self.exponents]

    def describe(self) -> str:
        """Human readable form, e.g. 'Z/3 + Z/9' or '0'."""
        parts = [f"Z/{q}" for q in self.invariant_factors()]
        parts += ["Z_(p)"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"exponents": list(self.exponents), "free_rank": self.free_rank}

    @staticmethod
    def sum_of(p: int, groups: Iterable["FinitePGroup"]) -> "FinitePGroup":
        total = FinitePGroup.zero(p)
        for group in groups:
            total = total + group
        return total
