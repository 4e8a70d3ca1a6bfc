# src/cohomology/rings.py
# Purpose: mod-p cohomology of products of B(Z/p) and CP^infinity factors
"""Cohomology rings as sparse dictionaries of normal-form monomials.

Odd p: each B(Z/p) slot contributes t_i (degree 2) and an exterior s_i
(degree 1); a CP^infinity slot contributes t_i only. p = 2: each B(Z/2)
slot is a polynomial generator s_i of degree 1 with no relation to t.
A slot may carry a truncation exponent e, meaning its polynomial generator
satisfies x^e = 0.

A monomial key is (t_exponents, s_exponents); for odd p the s exponents
are 0/1 and the implied order of the s factors is increasing index.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

from src.utils.error_handler import MalformedMapError, PreconditionError

LENS = "lens"
PROJECTIVE = "cp"

MonomialKey = Tuple[Tuple[int, ...], Tuple[int, ...]]


@dataclass(frozen=True)
class CohomologyRing:
    p: int
    slots: Tuple[str, ...]
    truncations: Tuple[Optional[int], ...] = ()

    def __post_init__(self):
        if any(kind not in (LENS, PROJECTIVE) for kind in self.slots):
            raise MalformedMapError(f"unknown slot kinds in {self.slots}")
        if not self.truncations:
            object.__setattr__(self, "truncations", (None,) * len(self.slots))
        if len(self.truncations) != len(self.slots):
            raise MalformedMapError("one truncation entry per slot")
        if self.p == 2 and PROJECTIVE in self.slots:
            raise MalformedMapError("the p=2 rings here have no CP^infinity slots")

    @classmethod
    def elementary(cls, p: int, rank: int, truncation: Optional[int] = None) -> "CohomologyRing":
        """H^*(B(Z/p)^rank; F_p), optionally truncated in every slot."""
        return cls(p, (LENS,) * rank, (truncation,) * rank)

    @property
    def rank(self) -> int:
        return len(self.slots)

    @property
    def exterior(self) -> bool:
        return self.p != 2

    def has_s(self, i: int) -> bool:
        return self.slots[i] == LENS

    def has_t(self, i: int) -> bool:
        return self.exterior or self.slots[i] == PROJECTIVE

    def key_degree(self, key: MonomialKey) -> int:
        t_exps, s_exps = key
        return 2 * sum(t_exps) + sum(s_exps)

    def zero(self) -> "CohomologyElement":
        return CohomologyElement(self, {})

    def one(self) -> "CohomologyElement":
        return CohomologyElement(self, {((0,) * self.rank, (0,) * self.rank): 1})

    def t(self, i: int) -> "CohomologyElement":
        """t_{i+1} (0-based slot index)."""
        if not self.has_t(i):
            raise MalformedMapError(f"slot {i + 1} carries no t class at p={self.p}")
        t_exps = tuple(int(j == i) for j in range(self.rank))
        return self._single(self._truncate((t_exps, (0,) * self.rank)))

    def s(self, i: int) -> "CohomologyElement":
        """s_{i+1} (0-based slot index)."""
        if not self.has_s(i):
            raise MalformedMapError(f"slot {i + 1} is CP^infinity and carries no s class")
        s_exps = tuple(int(j == i) for j in range(self.rank))
        return self._single(self._truncate(((0,) * self.rank, s_exps)))

    def _single(self, key: Optional[MonomialKey]) -> "CohomologyElement":
        return CohomologyElement(self, {key: 1} if key is not None else {})

    def monomial(self, t_exps: Tuple[int, ...], s_exps: Tuple[int, ...]) -> "CohomologyElement":
        result = self.one()
        for i, e in enumerate(t_exps):
            for _ in range(e):
                result = result * self.t(i)
        for i, e in enumerate(s_exps):
            for _ in range(e):
                result = result * self.s(i)
        return result

    def _truncate(self, key: MonomialKey) -> Optional[MonomialKey]:
        t_exps, s_exps = key
        for i, bound in enumerate(self.truncations):
            if bound is None:
                continue
            exponent = s_exps[i] if not self.exterior else t_exps[i]
            if exponent >= bound:
                return None
        return key

    def multiply_keys(self, a: MonomialKey, b: MonomialKey) -> Tuple[int, Optional[MonomialKey]]:
        """(sign, key) of the normal form of a*b; key None when the product is 0."""
        t_exps = tuple(x + y for x, y in zip(a[0], b[0]))
        if self.exterior:
            if any(x and y for x, y in zip(a[1], b[1])):
                return 0, None
            # moving each s of b past the larger-indexed s of a
            inversions = sum(
                1
                for i, x in enumerate(a[1])
                if x
                for j, y in enumerate(b[1])
                if y and j < i
            )
            sign = -1 if inversions % 2 else 1
            s_exps = tuple(x + y for x, y in zip(a[1], b[1]))
        else:
            sign = 1
            s_exps = tuple(x + y for x, y in zip(a[1], b[1]))
        key = self._truncate((t_exps, s_exps))
        return (sign, key) if key is not None else (0, None)

    def basis(self, degree: int) -> List[MonomialKey]:
        """Normal-form monomials of the given degree, lex ordered."""
        keys = []
        s_ranges = [
            range(0, 2 if self.exterior else degree + 1) if self.has_s(i) else range(1)
            for i in range(self.rank)
        ]
        for s_exps in product(*s_ranges):
            remaining = degree - sum(s_exps)
            if remaining < 0 or remaining % 2:
                continue
            t_slots = [i for i in range(self.rank) if self.has_t(i)]
            for t_choice in weak_compositions(remaining // 2, len(t_slots)):
                t_exps = [0] * self.rank
                for i, e in zip(t_slots, t_choice):
                    t_exps[i] = e
                key = self._truncate((tuple(t_exps), tuple(s_exps)))
                if key is not None:
                    keys.append(key)
        return sorted(keys)


def weak_compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class CohomologyElement:
    """Homogeneous element: monomial key -> coefficient in 0..p-1."""

    ring: CohomologyRing
    terms: Dict[MonomialKey, int] = field(default_factory=dict)

    def __post_init__(self):
        p = self.ring.p
        cleaned = {k: v % p for k, v in self.terms.items() if v % p}
        degrees = {self.ring.key_degree(k) for k in cleaned}
        if len(degrees) > 1:
            raise PreconditionError(f"inhomogeneous cohomology element (degrees {sorted(degrees)})")
        object.__setattr__(self, "terms", cleaned)

    @property
    def degree(self) -> Optional[int]:
        for key in self.terms:
            return self.ring.key_degree(key)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def _check_ring(self, other: "CohomologyElement"):
        if other.ring != self.ring:
            raise PreconditionError("cohomology elements live in different rings")

    def __add__(self, other: "CohomologyElement") -> "CohomologyElement":
        self._check_ring(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms.get(key, 0) + value
        return CohomologyElement(self.ring, terms)

    def scale(self, factor: int) -> "CohomologyElement":
        return CohomologyElement(self.ring, {k: v * factor for k, v in self.terms.items()})

    def __neg__(self) -> "CohomologyElement":
        return self.scale(-1)

    def __sub__(self, other: "CohomologyElement") -> "CohomologyElement":
        return self + (-other)

    def __mul__(self, other: "CohomologyElement") -> "CohomologyElement":
        return cup_product(self, other)

    def coefficient(self, key: MonomialKey) -> int:
        return self.terms.get(key, 0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            factors = []
            t_exps, s_exps = key
            for i, e in enumerate(t_exps):
                if e:
                    factors.append(f"t{i + 1}" + (f"^{e}" if e > 1 else ""))
            for i, e in enumerate(s_exps):
                if e:
                    factors.append(f"s{i + 1}" + (f"^{e}" if e > 1 else ""))
            monomial = "*".join(factors) or "1"
            value = self.terms[key]
            parts.append(monomial if value == 1 else f"{value}*{monomial}")
        return " + ".join(parts)


def cup_product(a: CohomologyElement, b: CohomologyElement) -> CohomologyElement:
    """Product in normal form, with the exterior sign for odd p.

    Raises:
        PreconditionError: if a and b live in different rings
    """
    a._check_ring(b)
    terms: Dict[MonomialKey, int] = {}
    for key_a, value_a in a.terms.items():
        for key_b, value_b in b.terms.items():
            sign, key = a.ring.multiply_keys(key_a, key_b)
            if key is None:
                continue
            terms[key] = terms.get(key, 0) + sign * value_a * value_b
    return CohomologyElement(a.ring, terms)
