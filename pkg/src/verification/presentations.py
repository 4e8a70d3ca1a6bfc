# src/verification/presentations.py
# Purpose: cokernel presentations of N^k and descriptors of the free modules L_k
"""Degreewise presentations of N^k = N (x)_{BP_*} ... (x)_{BP_*} N.

N is the reduced BP-homology of B(Z/p), resolved by free modules
F_1 -> F_0 -> N with F_0 free on y_m in degree 2m-1, F_1 free on y_m in
degree 2m and f_1(y_m) = sum_{i<m} a_i y_{m-i}. Hence N^k in degree e is
generated by monomial * y_{m_1} (x) ... (x) y_{m_k} (m_j >= 1) subject to
f_1 applied in each slot. For k = 0 the module is BP_* itself.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from src.chains.complex import compositions
from src.coefficients.generators import Monomial, monomial_basis
from src.coefficients.polynomial import GradedPolynomial
from src.coefficients.pseries import PSeriesTable
from src.core.finite_group import FinitePGroup
from src.core.smith import cokernel_structure
from src.core.sparse_matrix import SparseMatrix, SparseVector
from src.utils.error_handler import DegreeBoundError, PreconditionError
from src.utils.logging_factory import LoggingFactory

NGenerator = Tuple[Monomial, Tuple[int, ...]]


def generator_degree_of(generator: NGenerator) -> int:
    monomial, ys = generator
    return monomial.degree + sum(2 * m - 1 for m in ys)


@dataclass(frozen=True)
class NPowerPresentation:
    """(N^k)_degree as Z_(p)^generators / im(relations)."""

    k: int
    degree: int
    generators: Tuple[NGenerator, ...]
    index: Dict[NGenerator, int]
    relations: SparseMatrix

    @property
    def group(self) -> FinitePGroup:
        return cokernel_structure(self.relations)

    @property
    def size(self) -> int:
        return len(self.generators)


class NPowerModel:
    """Builds and caches presentations of N^k for one p-series table."""

    def __init__(self, pseries: PSeriesTable, k: int):
        if k < 0:
            raise PreconditionError("tensor power k must be nonnegative")
        self.pseries = pseries
        self.k = k
        self.p = pseries.p
        self._cache: Dict[int, NPowerPresentation] = {}
        self._groups: Dict[int, FinitePGroup] = {}
        self.logger = LoggingFactory.get_logger(__name__)

    def generators(self, degree: int) -> List[NGenerator]:
        if degree > self.pseries.degree_bound:
            raise DegreeBoundError(
                f"N^{self.k} in degree {degree} needs a p-series through {degree}"
            )
        result = []
        if degree < 0:
            return result
        for monomial_degree in range(0, degree - self.k + 1, 2):
            odd_parts = [
                c
                for c in compositions(degree - monomial_degree, self.k)
                if all(part % 2 for part in c)
            ]
            if not odd_parts:
                continue
            for monomial in monomial_basis(self.pseries.table, monomial_degree):
                for parts in odd_parts:
                    result.append((monomial, tuple((part + 1) // 2 for part in parts)))
        result.sort(key=lambda g: (g[0].sort_key(), g[1]))
        return result

    def presentation(self, degree: int) -> NPowerPresentation:
        """Generators and relation columns (one per generator and slot)."""
        if degree in self._cache:
            return self._cache[degree]
        generators = tuple(self.generators(degree))
        index = {g: i for i, g in enumerate(generators)}
        columns: List[SparseVector] = []
        for monomial, ys in generators:
            for slot in range(self.k):
                column: SparseVector = {}
                m = ys[slot]
                for i in range(m):
                    target_ys = ys[:slot] + (m - i,) + ys[slot + 1 :]
                    for coefficient_monomial, value in self.pseries.a(i).terms.items():
                        target = (monomial.times(coefficient_monomial), target_ys)
                        row = index[target]
                        updated = column.get(row, 0) + value
                        if updated:
                            column[row] = updated
                        else:
                            column.pop(row, None)
                columns.append(column)
        relations = SparseMatrix.from_columns(self.p, len(generators), columns)
        presentation = NPowerPresentation(self.k, degree, generators, index, relations)
        self._cache[degree] = presentation
        self.logger.debug(
            "N^%d degree %d: %d generators, %d relations",
            self.k,
            degree,
            len(generators),
            len(columns),
        )
        return presentation

    def group(self, degree: int) -> FinitePGroup:
        if degree < 0:
            return FinitePGroup.zero(self.p)
        if degree not in self._groups:
            self._groups[degree] = self.presentation(degree).group
        return self._groups[degree]

    def act(self, polynomial: GradedPolynomial, generator: NGenerator) -> Dict[NGenerator, Fraction]:
        """polynomial * generator, as a combination of generators."""
        monomial, ys = generator
        return {
            (monomial.times(coefficient_monomial), ys): value
            for coefficient_monomial, value in polynomial.terms.items()
        }

    def multiplication_matrix(self, polynomial: GradedPolynomial, degree: int) -> SparseMatrix:
        """Lift of multiplication by a homogeneous polynomial, degree -> degree + deg."""
        source = self.presentation(degree)
        target = self.presentation(degree + polynomial.degree)
        columns = []
        for generator in source.generators:
            columns.append(
                {target.index[g]: v for g, v in self.act(polynomial, generator).items()}
            )
        return SparseMatrix.from_columns(self.p, target.size, columns)


@dataclass(frozen=True)
class LModule:
    """Free BP_*-module on y_m (degree 2m) for 0 < m < p^k."""

    p: int
    k: int
    generator_degrees: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def rank(self) -> int:
        return len(self.generator_degrees)

    @property
    def is_zero(self) -> bool:
        return not self.generator_degrees


def l_module_table(p: int, k: int, inclusive_upper: bool = False) -> LModule:
    """Descriptor of L_k; k = 0 is the zero module.

    inclusive_upper widens the range to 0 < m <= p^k, a deliberately wrong
    variant used as a negative control.
    """
    if k < 0:
        raise PreconditionError("L_k needs k >= 0")
    top = p**k if inclusive_upper else p**k - 1
    return LModule(p, k, tuple(2 * m for m in range(1, top + 1)))
