# src/coefficients/polynomial.py
# Purpose: homogeneous elements of the truncated coefficient ring
"""Homogeneous polynomials in the v_m with exact rational coefficients.

Coefficients are Fractions. Elements of BP_* proper have p-local
coefficients; intermediate results of the logarithm do not, and
is_p_integral() tells the two apart.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple

from src.coefficients.generators import GeneratorTable, Monomial
from src.core.scalars import ScalarLike, is_p_local, residue
from src.utils.error_handler import DegreeBoundError, PreconditionError


@dataclass(frozen=True)
class GradedPolynomial:
    """Mapping Monomial -> Fraction, homogeneous of `degree`, no zero terms."""

    table: GeneratorTable
    degree: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Monomial, Fraction] = {}
        for monomial, coefficient in self.terms.items():
            if monomial.degree != self.degree:
                raise PreconditionError(
                    f"monomial of degree {monomial.degree} in a degree-{self.degree} element"
                )
            if coefficient != 0:
                clean[monomial] = Fraction(coefficient)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, table: GeneratorTable, degree: int) -> "GradedPolynomial":
        return cls(table, degree, {})

    @classmethod
    def scalar(cls, table: GeneratorTable, value: ScalarLike) -> "GradedPolynomial":
        return cls(table, 0, {table.one(): Fraction(value)})

    @classmethod
    def generator(cls, table: GeneratorTable, m: int) -> "GradedPolynomial":
        """v_m as a polynomial; m = 0 gives the scalar p."""
        if m == 0:
            return cls.scalar(table, table.p)
        monomial = table.generator(m)
        return cls(table, monomial.degree, {monomial: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda item: item[0].sort_key()))

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self.terms.get(monomial, Fraction(0))

    def _check_compatible(self, other: "GradedPolynomial"):
        if other.table != self.table:
            raise PreconditionError("polynomials over different generator tables")

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        self._check_compatible(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.degree != self.degree:
            raise PreconditionError(
                f"cannot add degree {self.degree} and degree {other.degree}"
            )
        terms = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            terms[monomial] = terms.get(monomial, 0) + coefficient
        return GradedPolynomial(self.table, self.degree, terms)

    def __neg__(self) -> "GradedPolynomial":
        return self.scale(-1)

    def __sub__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self + (-other)

    def scale(self, factor: ScalarLike) -> "GradedPolynomial":
        factor = Fraction(factor)
        return GradedPolynomial(
            self.table, self.degree, {m: c * factor for m, c in self.terms.items()}
        )

    def __mul__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return multiply(self, other)

    def is_p_integral(self) -> bool:
        return all(is_p_local(c, self.table.p) for c in self.terms.values())

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for monomial, coefficient in self:
            name = self.table.describe(monomial)
            if monomial.is_one():
                pieces.append(str(coefficient))
            elif coefficient == 1:
                pieces.append(name)
            elif coefficient == -1:
                pieces.append(f"-{name}")
            else:
                pieces.append(f"{coefficient}*{name}")
        return " + ".join(pieces).replace("+ -", "- ")

    def to_json_terms(self) -> list:
        return [
            {
                "exps": list(monomial.exponents),
                "num": str(coefficient.numerator),
                "den": str(coefficient.denominator),
            }
            for monomial, coefficient in self
        ]


def multiply(a: GradedPolynomial, b: GradedPolynomial) -> GradedPolynomial:
    """Homogeneous product.

    Raises:
        DegreeBoundError: if deg a + deg b exceeds the table bound
    """
    a._check_compatible(b)
    degree = a.degree + b.degree
    if degree > a.table.degree_bound:
        raise DegreeBoundError(
            f"product degree {degree} exceeds bound {a.table.degree_bound}"
        )
    terms: Dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            product = ma.times(mb)
            terms[product] = terms.get(product, 0) + ca * cb
    return GradedPolynomial(a.table, degree, terms)


def power(a: GradedPolynomial, exponent: int) -> GradedPolynomial:
    result = GradedPolynomial.scalar(a.table, 1)
    for _ in range(exponent):
        result = multiply(result, a)
    return result


def reduce_mod_ideal(a: GradedPolynomial, m: int) -> GradedPolynomial:
    """Image of a modulo (v_0, ..., v_{m-1}), v_0 = p.

    Monomials divisible by some v_j with 1 <= j <= m-1 are dropped and the
    surviving coefficients are reduced to integers in [0, p). For m = 0 the
    ideal is zero and a is returned unchanged.

    Raises:
        IntegralityError: if a coefficient is not p-local
    """
    if m < 0:
        raise PreconditionError("ideal index must be nonnegative")
    if m == 0:
        return a
    p = a.table.p
    terms = {}
    for monomial, coefficient in a.terms.items():
        if any(monomial.divisible_by_generator(j) for j in range(1, m)):
            continue
        reduced = residue(coefficient, p)
        if reduced:
            terms[monomial] = Fraction(reduced)
    return GradedPolynomial(a.table, a.degree, terms)
