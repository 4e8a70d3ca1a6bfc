# src/coefficients/pseries.py
# Purpose: logarithm, exponential and p-series of the formal group law
"""The p-series (p)*x = sum_i a_i x^{1+i} of the Brown-Peterson formal group.

Generators follow the Hazewinkel recursion
    p * l_n = sum_{i<n} l_i * v_{n-i}^{p^i},   l_0 = 1,
for the logarithm log(x) = sum_n l_n x^{p^n}. The coefficients a_i come from
log([p](x)) = p * log(x): comparing coefficients of x^j gives

    a_{j-1} = p * [x^j] log(x) - sum_{k>=1} l_k * [x^j] f^{p^k},

where f = [p](x) and the right side only involves a_0 .. a_{j-2}.
Powers f^N are expanded with the power recurrence for h^N, f = x*h.

Series carry x in degree 2, so the coefficient of x^j in a series of
weight w has internal degree w + 2j; the p-series has weight -2.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from src.coefficients.generators import GeneratorTable, generator_degree
from src.coefficients.polynomial import (
    GradedPolynomial,
    multiply,
    power,
    reduce_mod_ideal,
)
from src.core.verdict import CheckResult, Verdict
from src.utils.error_handler import (
    DegreeBoundError,
    IntegralityError,
    PreconditionError,
)
from src.utils.logging_factory import LoggingFactory

logger = LoggingFactory.get_logger(__name__)

SCHEMA_VERSION = 1
SCHEMES = ("hazewinkel", "singular")


@dataclass(frozen=True)
class RationalSeries:
    """Truncated power series in x with GradedPolynomial coefficients.

    coefficients[j] is the coefficient of x^j, of degree weight + 2j;
    terms beyond x^{order-1} are unknown, never zero.
    """

    table: GeneratorTable
    weight: int
    coefficients: Tuple[GradedPolynomial, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_terms(
        cls,
        table: GeneratorTable,
        weight: int,
        order: int,
        terms: Dict[int, GradedPolynomial],
    ) -> "RationalSeries":
        coefficients = []
        for j in range(order):
            coefficients.append(
                terms.get(j, GradedPolynomial.zero(table, weight + 2 * j))
            )
        return cls(table, weight, tuple(coefficients))

    @classmethod
    def variable(cls, table: GeneratorTable, order: int) -> "RationalSeries":
        """The series x itself."""
        return cls.from_terms(table, -2, order, {1: GradedPolynomial.scalar(table, 1)})

    def coefficient(self, j: int) -> GradedPolynomial:
        if not 0 <= j < self.order:
            raise DegreeBoundError(f"x^{j} is beyond the truncation order {self.order}")
        return self.coefficients[j]

    def scale(self, factor) -> "RationalSeries":
        return RationalSeries(
            self.table, self.weight, tuple(c.scale(factor) for c in self.coefficients)
        )

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        if other.weight != self.weight:
            raise PreconditionError("cannot add series of different weight")
        order = min(self.order, other.order)
        return RationalSeries(
            self.table,
            self.weight,
            tuple(self.coefficients[j] + other.coefficients[j] for j in range(order)),
        )

    def __mul__(self, other: "RationalSeries") -> "RationalSeries":
        order = min(self.order, other.order)
        weight = self.weight + other.weight
        terms = {}
        for j in range(order):
            total = GradedPolynomial.zero(self.table, weight + 2 * j)
            for a in range(j + 1):
                left, right = self.coefficients[a], other.coefficients[j - a]
                if left.is_zero() or right.is_zero():
                    continue
                total = total + multiply(left, right)
            terms[j] = total
        return RationalSeries.from_terms(self.table, weight, order, terms)

    def agrees_with(self, other: "RationalSeries") -> bool:
        order = min(self.order, other.order)
        return all(
            self.coefficients[j].terms == other.coefficients[j].terms
            for j in range(order)
        )


@dataclass(frozen=True)
class PSeriesTable:
    """Coefficients a_0 .. a_{floor(D/2)} of the p-series, with a scheme tag."""

    p: int
    degree_bound: int
    coefficients: Tuple[GradedPolynomial, ...]
    scheme: str = "hazewinkel"
    table: GeneratorTable = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "table", GeneratorTable(self.p, self.degree_bound))

    def a(self, i: int) -> GradedPolynomial:
        """a_i; never extrapolated past the degree bound.

        Raises:
            DegreeBoundError: if 2i > degree_bound
        """
        if i < 0 or 2 * i > self.degree_bound or i >= len(self.coefficients):
            raise DegreeBoundError(
                f"a_{i} has degree {2 * i}, table covers degrees <= {self.degree_bound}"
            )
        return self.coefficients[i]

    def covers(self, degree: int) -> bool:
        return degree <= self.degree_bound

    def restrict(self, degree_bound: int) -> "PSeriesTable":
        """The same coefficients viewed in a smaller degree window."""
        if degree_bound > self.degree_bound:
            raise DegreeBoundError("cannot restrict to a larger degree bound")
        smaller = GeneratorTable(self.p, degree_bound)
        coefficients = []
        for i in range(degree_bound // 2 + 1):
            terms = {
                smaller.monomial(m.exponents[: smaller.size]): c
                for m, c in self.coefficients[i].terms.items()
            }
            coefficients.append(GradedPolynomial(smaller, 2 * i, terms))
        return PSeriesTable(self.p, degree_bound, tuple(coefficients), self.scheme)

    def as_series(self) -> RationalSeries:
        terms = {i + 1: a for i, a in enumerate(self.coefficients)}
        return RationalSeries.from_terms(self.table, -2, len(self.coefficients) + 1, terms)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "p": self.p,
            "degree_bound": self.degree_bound,
            "scheme": self.scheme,
            "a": [
                {"i": i, "terms": a.to_json_terms()}
                for i, a in enumerate(self.coefficients)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, document: dict) -> "PSeriesTable":
        if document.get("schema") != SCHEMA_VERSION:
            raise PreconditionError(f"unsupported p-series schema {document.get('schema')}")
        p, bound = int(document["p"]), int(document["degree_bound"])
        table = GeneratorTable(p, bound)
        coefficients = []
        for entry in sorted(document["a"], key=lambda e: e["i"]):
            terms = {
                table.monomial(tuple(term["exps"])): Fraction(
                    int(term["num"]), int(term["den"])
                )
                for term in entry["terms"]
            }
            coefficients.append(GradedPolynomial(table, 2 * int(entry["i"]), terms))
        return cls(p, bound, tuple(coefficients), document.get("scheme", "hazewinkel"))

    @classmethod
    def from_json(cls, text: str) -> "PSeriesTable":
        return cls.from_dict(json.loads(text))


def compute_logarithm(p: int, degree_bound: int) -> List[GradedPolynomial]:
    """l_0, l_1, ... for every n with 2(p^n - 1) <= degree_bound.

    Example:
        compute_logarithm(3, 16)[1] == v1/3
    """
    table = GeneratorTable(p, degree_bound)
    logs = [GradedPolynomial.scalar(table, 1)]
    n = 1
    while 2 * (p**n - 1) <= degree_bound:
        total = GradedPolynomial.zero(table, 2 * (p**n - 1))
        for i in range(n):
            v_power = power(GradedPolynomial.generator(table, n - i), p**i)
            total = total + multiply(logs[i], v_power)
        logs.append(total.scale(Fraction(1, p)))
        n += 1
    return logs


def logarithm_series(p: int, degree_bound: int) -> RationalSeries:
    """log(x) = sum l_n x^{p^n}, truncated at x^{floor(D/2)+1}."""
    table = GeneratorTable(p, degree_bound)
    order = degree_bound // 2 + 2
    terms = {p**n: l for n, l in enumerate(compute_logarithm(p, degree_bound))}
    return RationalSeries.from_terms(
        table, -2, order, {j: c for j, c in terms.items() if j < order}
    )


def compositional_inverse(series: RationalSeries) -> RationalSeries:
    """exp with exp(series(x)) = x, for a series starting x + O(x^2).

    Uses b_j = -sum_{i<j} b_i [x^j] series^i with b_1 = 1.
    """
    table, order = series.table, series.order
    powers = {1: series}
    for i in range(2, order):
        powers[i] = powers[i - 1] * series
    b: Dict[int, GradedPolynomial] = {1: GradedPolynomial.scalar(table, 1)}
    for j in range(2, order):
        total = GradedPolynomial.zero(table, 2 * (j - 1))
        for i in range(1, j):
            coefficient = powers[i].coefficient(j)
            if coefficient.is_zero() or b[i].is_zero():
                continue
            total = total + multiply(b[i], coefficient)
        b[j] = -total
    return RationalSeries.from_terms(table, -2, order, b)


def compose(outer: RationalSeries, inner: RationalSeries) -> RationalSeries:
    """outer(inner(x)) for inner = O(x)."""
    table, order = inner.table, min(outer.order, inner.order)
    result = RationalSeries.from_terms(table, -2, order, {})
    inner_power = RationalSeries.from_terms(
        table, 0, order, {0: GradedPolynomial.scalar(table, 1)}
    )
    for i in range(1, order):
        inner_power = inner_power * inner
        coefficient = outer.coefficient(i)
        if coefficient.is_zero():
            continue
        constant = RationalSeries.from_terms(table, 2 * i - 2, order, {0: coefficient})
        result = result + constant * inner_power
    return result


def _power_coefficients(
    base: Sequence[GradedPolynomial], exponent: int, upto: int, known: List[GradedPolynomial]
):
    """Extend known = [H_0, H_1, ...] for H = h^exponent to index upto.

    H_0 = h_0^N, H_m = 1/(m h_0) sum_{i=1}^m ((N+1) i - m) h_i H_{m-i}.
    """
    h0 = base[0].coefficient(base[0].table.one())
    while len(known) <= upto:
        m = len(known)
        if m == 0:
            known.append(GradedPolynomial.scalar(base[0].table, h0**exponent))
            continue
        total = GradedPolynomial.zero(base[0].table, 2 * m)
        for i in range(1, m + 1):
            if base[i].is_zero() or known[m - i].is_zero():
                continue
            total = total + multiply(base[i], known[m - i]).scale((exponent + 1) * i - m)
        known.append(total.scale(Fraction(1, m) / h0))


@lru_cache(maxsize=32)
def compute_p_series(p: int, degree_bound: int, scheme: str = "hazewinkel") -> PSeriesTable:
    """PSeriesTable with a_i for 2i <= degree_bound.

    Raises:
        IntegralityError: if a coefficient with negative p-valuation survives
        PreconditionError: for an unknown generator scheme
    """
    if scheme == "singular":
        return singular_table(p, degree_bound)
    if scheme != "hazewinkel":
        raise PreconditionError(f"unknown generator scheme {scheme!r}")

    logger.info("Computing %s p-series for p=%d up to degree %d", scheme, p, degree_bound)
    table = GeneratorTable(p, degree_bound)
    logs = compute_logarithm(p, degree_bound)
    top = degree_bound // 2 + 1

    a: List[GradedPolynomial] = []
    expansions: Dict[int, List[GradedPolynomial]] = {k: [] for k in range(1, len(logs))}
    for j in range(1, top + 1):
        total = GradedPolynomial.zero(table, 2 * (j - 1))
        for n, l_n in enumerate(logs):
            if p**n == j:
                total = total + l_n.scale(p)
        for k in range(1, len(logs)):
            m = j - p**k
            if m < 0:
                continue
            _power_coefficients(a, p**k, m, expansions[k])
            total = total - multiply(logs[k], expansions[k][m])
        a.append(total)

    for i, coefficient in enumerate(a):
        if not coefficient.is_p_integral():
            raise IntegralityError(f"a_{i} = {coefficient} is not p-integral")
    logger.debug("p-series a_0..a_%d computed", len(a) - 1)
    return PSeriesTable(p, degree_bound, tuple(a), scheme)


def singular_table(p: int, degree_bound: int) -> PSeriesTable:
    """a_0 = p and a_i = 0 for i > 0: the ordinary chain model."""
    table = GeneratorTable(p, degree_bound)
    coefficients = [GradedPolynomial.scalar(table, p)]
    coefficients += [
        GradedPolynomial.zero(table, 2 * i) for i in range(1, degree_bound // 2 + 1)
    ]
    return PSeriesTable(p, degree_bound, tuple(coefficients), "singular")


def check_p_series_properties(t: PSeriesTable) -> List[CheckResult]:
    """a_0 = p, homogeneity, integrality and a_{p^m-1} = v_m mod (p, v_1..v_{m-1})."""
    table = t.table
    checks = []

    a0 = t.coefficients[0] if t.coefficients else None
    checks.append(
        CheckResult(
            "a_0 = p",
            Verdict.of(a0 is not None and a0.terms == {table.one(): Fraction(t.p)}),
            f"a_0 = {a0}",
        )
    )

    bad_degrees = [i for i, a in enumerate(t.coefficients) if a.degree != 2 * i]
    checks.append(
        CheckResult(
            "homogeneity deg a_i = 2i",
            Verdict.of(not bad_degrees),
            f"violations at i = {bad_degrees}" if bad_degrees else "all degrees match",
        )
    )

    non_integral = [i for i, a in enumerate(t.coefficients) if not a.is_p_integral()]
    checks.append(
        CheckResult(
            "p-integrality",
            Verdict.of(not non_integral),
            f"non-integral a_i at i = {non_integral}" if non_integral else "all p-local",
        )
    )

    if t.scheme == "singular":
        return checks

    m = 1
    while generator_degree(t.p, m) <= t.degree_bound:
        index = t.p**m - 1
        reduced = reduce_mod_ideal(t.coefficients[index], m)
        expected = reduce_mod_ideal(GradedPolynomial.generator(table, m), m)
        checks.append(
            CheckResult(
                f"a_{index} = v{m} mod (p..v{m - 1})",
                Verdict.of(reduced.terms == expected.terms),
                f"reduced a_{index} = {reduced}",
            )
        )
        m += 1
    return checks


def check_log_exp_round_trip(t: PSeriesTable) -> List[CheckResult]:
    """log(exp(y)) = y, and exp(p log x) reproduces the stored p-series."""
    log_series = logarithm_series(t.p, t.degree_bound)
    exp_series = compositional_inverse(log_series)
    identity = RationalSeries.variable(t.table, log_series.order)

    round_trip = compose(log_series, exp_series)
    p_times_log = log_series.scale(t.p)
    rebuilt = compose(exp_series, p_times_log)

    return [
        CheckResult(
            "log(exp(y)) = y",
            Verdict.of(round_trip.agrees_with(identity)),
            f"checked through x^{log_series.order - 1}",
        ),
        CheckResult(
            "exp(p log x) = [p](x)",
            Verdict.of(rebuilt.agrees_with(t.as_series())),
            f"checked through x^{log_series.order - 1}",
        ),
    ]


def describe_coefficients(t: PSeriesTable, ideal: Optional[int] = 1) -> List[dict]:
    """Rows (i, a_i, a_i mod (v_0..v_{ideal-1})) for rendering."""
    rows = []
    for i, a in enumerate(t.coefficients):
        row = {"i": i, "degree": 2 * i, "a": str(a)}
        if ideal is not None:
            row["mod_p"] = str(reduce_mod_ideal(a, ideal))
        rows.append(row)
    return rows
