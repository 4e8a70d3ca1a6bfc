# src/chains/operators.py
# Purpose: chain maps on the assembled complex and their effect in homology
"""v_j-multiplication, cap product with t and the toral class.

Multiplication by v_j (v_0 = p) is a chain map: coefficients are central
and of even degree, so no signs appear. Capping with t in factor i sends
c_d to c_{d-2} (and to 0 for d <= 2); it commutes with the differential
because the a_i coefficients are untouched.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from src.chains.complex import ChainBasisElement, DegreewiseComplex
from src.chains.homology import HomologyClass, HomologyTable
from src.coefficients.generators import generator_degree
from src.core.finite_group import FinitePGroup
from src.core.sparse_matrix import SparseMatrix, SparseVector, VectorLike, as_sparse_vector
from src.utils.error_handler import AssemblyError, DegreeBoundError, PreconditionError
from src.utils.logging_factory import LoggingFactory

logger = LoggingFactory.get_logger(__name__)


def multiplication_degree(cx: DegreewiseComplex, j: int) -> int:
    """Degree of v_j; v_0 = p has degree 0."""
    if j < 0:
        raise PreconditionError("generator index must be nonnegative")
    return generator_degree(cx.p, j) if j else 0


def multiply_chain(
    cx: DegreewiseComplex, j: int, vector: VectorLike, degree: int
) -> SparseVector:
    """v_j * vector, landing in degree + deg v_j.

    Raises:
        DegreeBoundError: if the product leaves the assembled range
    """
    shift = multiplication_degree(cx, j)
    if degree + shift > cx.max_degree:
        raise DegreeBoundError(
            f"v{j} times degree {degree} lands in {degree + shift} > {cx.max_degree}"
        )
    vector = as_sparse_vector(vector, cx.dimension(degree), cx.p)
    if j == 0:
        return {i: cx.p * v for i, v in vector.items()}
    v_j = cx.table.generator(j)
    basis = cx.basis(degree)
    result: SparseVector = {}
    for i, value in vector.items():
        element = basis[i]
        target = ChainBasisElement(element.monomial.times(v_j), element.generators)
        result[cx.index_of(target)] = value
    return result


@dataclass(frozen=True)
class InducedMap:
    """A homomorphism H_source -> H_target in SNF coordinates.

    columns[i] are the target coordinates of the i-th source generator.
    """

    source_degree: int
    target_degree: int
    source: FinitePGroup
    target: FinitePGroup
    columns: Tuple[Tuple, ...]

    @property
    def is_zero(self) -> bool:
        return all(all(x == 0 for x in column) for column in self.columns)


def induced_multiplication(
    cx: DegreewiseComplex,
    j: int,
    homology: HomologyTable,
    degrees: Optional[Iterable[int]] = None,
) -> Dict[int, InducedMap]:
    """Matrices of v_j on homology, degree d -> d + deg v_j.

    Raises:
        DegreeBoundError: if some target degree lacks homology data
    """
    shift = multiplication_degree(cx, j)
    if j and not cx.table.has_generator(j):
        raise DegreeBoundError(f"v{j} is beyond the degree bound {cx.max_degree}")
    high = cx.max_degree - 1
    if degrees is None:
        degrees = [d for d in sorted(homology.groups) if d + shift <= high]
    maps = {}
    for d in degrees:
        if d + shift > high or d + shift not in homology.data:
            raise DegreeBoundError(
                f"v{j} on degree {d} needs homology through degree {d + shift}"
            )
        source = homology.data[d]
        target = homology.data[d + shift]
        columns = tuple(
            target.coordinates(multiply_chain(cx, j, rep, d))
            for rep in source.representatives
        )
        maps[d] = InducedMap(d, d + shift, source.structure, target.structure, columns)
    return maps


def multiply_class(
    cx: DegreewiseComplex, j: int, homology: HomologyTable, cls: HomologyClass
) -> HomologyClass:
    """The class of v_j * z for a homology class of z."""
    shift = multiplication_degree(cx, j)
    target_degree = cls.degree + shift
    if target_degree not in homology.data:
        raise DegreeBoundError(
            f"v{j} * class of degree {cls.degree} needs homology in degree {target_degree}"
        )
    product = multiply_chain(cx, j, cls.vector, cls.degree)
    return homology.class_of(target_degree, product)


class CapOperator:
    """Cap product with t in one tensor factor, a chain map of degree -2."""

    def __init__(self, cx: DegreewiseComplex, factor: int):
        if not 1 <= factor <= cx.n:
            raise PreconditionError(f"factor index {factor} outside 1..{cx.n}")
        self.cx = cx
        self.factor = factor
        self.logger = LoggingFactory.get_logger(__name__)

    def image_of(self, element: ChainBasisElement) -> Optional[ChainBasisElement]:
        i = self.factor - 1
        d = element.generators[i]
        if d <= 2:
            return None
        generators = element.generators[:i] + (d - 2,) + element.generators[i + 1 :]
        return ChainBasisElement(element.monomial, generators)

    def apply(self, vector: VectorLike, degree: int) -> SparseVector:
        vector = as_sparse_vector(vector, self.cx.dimension(degree), self.cx.p)
        basis = self.cx.basis(degree)
        result: SparseVector = {}
        for i, value in vector.items():
            target = self.image_of(basis[i])
            if target is not None:
                result[self.cx.index_of(target)] = value
        return result

    def matrix(self, degree: int) -> SparseMatrix:
        """C_degree -> C_{degree-2}."""
        entries = {}
        for c, element in enumerate(self.cx.basis(degree)):
            target = self.image_of(element)
            if target is not None:
                entries[(self.cx.index_of(target), c)] = Fraction(1)
        rows = self.cx.dimension(degree - 2) if degree >= 2 else 0
        return SparseMatrix(self.cx.p, rows, self.cx.dimension(degree), entries)

    def verify_chain_map(self) -> bool:
        """cap∘d == d∘cap on every assembled degree."""
        for d in range(3, self.cx.max_degree + 1):
            left = self.cx.boundary(d - 2) @ self.matrix(d)
            right = self.matrix(d - 1) @ self.cx.boundary(d)
            if left.entries != right.entries:
                self.logger.error("cap with t fails to commute with d in degree %d", d)
                return False
        return True


def cap_with_t(cx: DegreewiseComplex, factor: int) -> CapOperator:
    """Cap with t in the given factor (1-based), checked to be a chain map.

    Raises:
        AssemblyError: if the operator does not commute with the differential
    """
    operator = CapOperator(cx, factor)
    if not operator.verify_chain_map():
        raise AssemblyError(f"cap with t in factor {factor} is not a chain map")
    return operator


def toral_class(cx: DegreewiseComplex, homology: HomologyTable) -> HomologyClass:
    """Class of c_1 (x) ... (x) c_1 in degree n.

    Raises:
        DegreeBoundError: if degree n homology is not available
    """
    if cx.n not in homology.data:
        raise DegreeBoundError(
            f"toral class lives in degree {cx.n}; homology computed for {homology.window}"
        )
    element = ChainBasisElement(cx.table.one(), (1,) * cx.n)
    return homology.class_of(cx.n, cx.vector_of(element))
