# src/coefficients/generators.py
# Purpose: generator tables and monomials of the truncated ring BP_*
"""Generators v_m of BP_* = Z_(p)[v_1, v_2, ...] up to a degree bound.

deg v_m = 2p^m - 2. v_0 is not a variable: it stands for the scalar p.
Monomials are exponent vectors over the stored generators.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from src.utils.error_handler import DegreeBoundError, PreconditionError


def generator_degree(p: int, m: int) -> int:
    """Degree of v_m (v_0 = p has degree 0)."""
    return 2 * p**m - 2


@dataclass(frozen=True)
class GeneratorTable:
    """All v_m with 2p^m - 2 <= degree_bound, m >= 1."""

    p: int
    degree_bound: int

    def __post_init__(self):
        if self.p < 2:
            raise PreconditionError(f"p must be prime, got {self.p}")
        if self.degree_bound < 0:
            raise PreconditionError("degree bound must be nonnegative")

    @property
    def degrees(self) -> Tuple[int, ...]:
        return _generator_degrees(self.p, self.degree_bound)

    @property
    def size(self) -> int:
        return len(self.degrees)

    def has_generator(self, m: int) -> bool:
        """True for m = 0 (the scalar p) and for every stored v_m."""
        return m == 0 or 1 <= m <= self.size

    def name(self, m: int) -> str:
        return f"v{m}"

    def one(self) -> "Monomial":
        return Monomial((0,) * self.size, 0)

    def generator(self, m: int) -> "Monomial":
        """The monomial v_m (m >= 1)."""
        if not 1 <= m <= self.size:
            raise DegreeBoundError(
                f"v{m} has degree {generator_degree(self.p, m)} > {self.degree_bound}"
            )
        exponents = tuple(int(i == m - 1) for i in range(self.size))
        return Monomial(exponents, self.degrees[m - 1])

    def monomial(self, exponents: Tuple[int, ...]) -> "Monomial":
        if len(exponents) != self.size:
            raise PreconditionError(
                f"exponent vector {exponents} needs {self.size} entries"
            )
        degree = sum(e * d for e, d in zip(exponents, self.degrees))
        if degree > self.degree_bound:
            raise DegreeBoundError(f"monomial degree {degree} > {self.degree_bound}")
        return Monomial(tuple(exponents), degree)

    def describe(self, monomial: "Monomial") -> str:
        parts = []
        for i, e in enumerate(monomial.exponents):
            if e == 1:
                parts.append(f"v{i + 1}")
            elif e > 1:
                parts.append(f"v{i + 1}^{e}")
        return "*".join(parts) if parts else "1"


@lru_cache(maxsize=None)
def _generator_degrees(p: int, degree_bound: int) -> Tuple[int, ...]:
    degrees = []
    m = 1
    while generator_degree(p, m) <= degree_bound:
        degrees.append(generator_degree(p, m))
        m += 1
    return tuple(degrees)


@dataclass(frozen=True, order=True)
class Monomial:
    """Exponent vector with its (derived) degree."""

    exponents: Tuple[int, ...]
    degree: int

    def is_one(self) -> bool:
        return not any(self.exponents)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
            self.degree + other.degree,
        )

    def divisible_by_generator(self, m: int) -> bool:
        """True iff v_m (m >= 1) divides this monomial."""
        return m >= 1 and m <= len(self.exponents) and self.exponents[m - 1] > 0

    def sort_key(self):
        """Graded-lex: degree ascending, then exponents lex descending."""
        return (self.degree, tuple(-e for e in self.exponents))


@lru_cache(maxsize=None)
def _exponent_vectors(degrees: Tuple[int, ...], degree: int) -> Tuple[Tuple[int, ...], ...]:
    if not degrees:
        return ((),) if degree == 0 else ()
    head, tail = degrees[0], degrees[1:]
    vectors = []
    for e in range(degree // head, -1, -1):
        for rest in _exponent_vectors(tail, degree - e * head):
            vectors.append((e,) + rest)
    return tuple(vectors)


def monomial_basis(table: GeneratorTable, degree: int) -> List[Monomial]:
    """All monomials of exactly the given degree, graded-lex ordered.

    Empty for odd or negative degrees.

    Raises:
        DegreeBoundError: if degree exceeds the table's bound

    Example:
        monomial_basis(GeneratorTable(3, 16), 16) -> [v1^4, v2]
    """
    if degree > table.degree_bound:
        raise DegreeBoundError(
            f"degree {degree} exceeds generator table bound {table.degree_bound}"
        )
    if degree < 0 or degree % 2:
        return []
    return [Monomial(e, degree) for e in _exponent_vectors(table.degrees, degree)]
