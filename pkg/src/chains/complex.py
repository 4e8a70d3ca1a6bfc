# src/chains/complex.py
# Purpose: assemble the tensor powers of the BP chain model degree by degree
"""Degreewise assembly of C^BP (x) ... (x) C^BP over BP_*.

A basis element is a monomial of BP_* times c_{d_1} (x) ... (x) c_{d_n},
d_j >= 1. The differential on one factor is

    c_{2m}   -> sum_{i=0}^{m-1} a_i * c_{2(m-i)-1}
    c_{2m+1} -> 0

and on tensors it follows the Koszul rule with sign (-1)^{d_1+...+d_{j-1}}
for the j-th factor. Each application turns exactly one even generator
into an odd one, so the number of odd generators (odd_count) goes up by one.
"""

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from tqdm import tqdm

from src.coefficients.generators import Monomial, monomial_basis
from src.coefficients.pseries import PSeriesTable
from src.core.sparse_matrix import SparseMatrix, SparseVector, add_scaled
from src.utils.error_handler import AssemblyError, DegreeBoundError, PreconditionError
from src.utils.logging_factory import LoggingFactory

logger = LoggingFactory.get_logger(__name__)


@dataclass(frozen=True, order=True)
class ChainBasisElement:
    """monomial * c_{d_1} (x) ... (x) c_{d_n}."""

    monomial: Monomial
    generators: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.monomial.degree + sum(self.generators)

    @property
    def odd_count(self) -> int:
        return sum(1 for d in self.generators if d % 2)

    def sort_key(self):
        return (self.monomial.sort_key(), self.generators)

    def describe(self, table) -> str:
        tensor = " (x) ".join(f"c{d}" for d in self.generators)
        if self.monomial.is_one():
            return tensor
        return f"{table.describe(self.monomial)} * {tensor}"


@lru_cache(maxsize=None)
def compositions(total: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    """Ordered tuples of `parts` positive integers summing to total, lex ascending."""
    if parts == 0:
        return ((),) if total == 0 else ()
    result = []
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            result.append((first,) + rest)
    return tuple(result)


@dataclass
class DegreewiseComplex:
    """Bases and boundary matrices of C^BP^{(x) n} in degrees 0..max_degree.

    boundaries[d] maps degree d to degree d-1; its columns follow bases[d].
    """

    p: int
    n: int
    max_degree: int
    pseries: PSeriesTable
    bases: Dict[int, Tuple[ChainBasisElement, ...]] = field(default_factory=dict)
    indices: Dict[int, Dict[ChainBasisElement, int]] = field(default_factory=dict)
    boundaries: Dict[int, SparseMatrix] = field(default_factory=dict)

    @property
    def table(self):
        return self.pseries.table

    @property
    def homology_window(self) -> Tuple[int, int]:
        """Degrees whose homology is fully determined: 1..D-1."""
        return (1, self.max_degree - 1)

    def basis(self, degree: int) -> Tuple[ChainBasisElement, ...]:
        if degree < 0:
            return ()
        if degree > self.max_degree:
            raise DegreeBoundError(
                f"degree {degree} beyond assembled bound {self.max_degree}"
            )
        return self.bases[degree]

    def dimension(self, degree: int) -> int:
        return len(self.basis(degree))

    def index_of(self, element: ChainBasisElement) -> int:
        return self.indices[element.degree][element]

    def boundary(self, degree: int) -> SparseMatrix:
        """Boundary C_degree -> C_{degree-1}."""
        if degree > self.max_degree:
            raise DegreeBoundError(
                f"boundary from degree {degree} needs max_degree >= {degree}"
            )
        if degree < 1:
            return SparseMatrix.zeros(self.p, 0, self.dimension(max(degree, 0)))
        return self.boundaries[degree]

    def strata(self, degree: int) -> Dict[int, List[int]]:
        """Basis positions grouped by odd_count."""
        grouped: Dict[int, List[int]] = {}
        for i, element in enumerate(self.basis(degree)):
            grouped.setdefault(element.odd_count, []).append(i)
        return grouped

    def vector_of(self, element: ChainBasisElement) -> SparseVector:
        return {self.index_of(element): Fraction(1)}


def enumerate_basis(pseries: PSeriesTable, n: int, degree: int) -> List[ChainBasisElement]:
    """Basis of the degree-`degree` chains, ordered by (monomial, generator tuple)."""
    elements = []
    for monomial_degree in range(0, degree - n + 1, 2):
        tuples = compositions(degree - monomial_degree, n)
        if not tuples:
            continue
        for monomial in monomial_basis(pseries.table, monomial_degree):
            for generators in tuples:
                elements.append(ChainBasisElement(monomial, generators))
    elements.sort(key=ChainBasisElement.sort_key)
    return elements


def boundary_of(
    pseries: PSeriesTable, element: ChainBasisElement
) -> Dict[ChainBasisElement, Fraction]:
    """Koszul-signed differential of one basis element."""
    image: Dict[ChainBasisElement, Fraction] = {}
    prefix = 0
    for j, d in enumerate(element.generators):
        if d % 2 == 0:
            m = d // 2
            sign = -1 if prefix % 2 else 1
            for i in range(m):
                a_i = pseries.a(i)
                target = element.generators[:j] + (2 * (m - i) - 1,) + element.generators[j + 1 :]
                for coefficient_monomial, coefficient in a_i.terms.items():
                    key = ChainBasisElement(element.monomial.times(coefficient_monomial), target)
                    value = image.get(key, 0) + sign * coefficient
                    if value:
                        image[key] = value
                    else:
                        image.pop(key, None)
        prefix += d
    return image


def assemble_complex(
    p: int,
    n: int,
    max_degree: int,
    pseries: PSeriesTable,
    progress: bool = False,
) -> DegreewiseComplex:
    """Build bases and boundaries of C^BP^{(x) n} through max_degree.

    Args:
        p: prime
        n: number of tensor factors (>= 1)
        max_degree: top assembled degree D
        pseries: p-series table covering degrees <= D
        progress: show a tqdm bar on stderr

    Raises:
        DegreeBoundError: if the p-series does not reach max_degree
        AssemblyError: if d∘d != 0 or odd_count does not rise by one
    """
    if n < 1:
        raise PreconditionError("the tensor power n must be at least 1")
    if pseries.p != p:
        raise PreconditionError(f"p-series is for p={pseries.p}, not p={p}")
    if pseries.degree_bound < max_degree:
        raise DegreeBoundError(
            f"p-series covers degrees <= {pseries.degree_bound}, need {max_degree}"
        )
    if pseries.degree_bound > max_degree:
        pseries = pseries.restrict(max_degree)

    logger.info(
        "Assembling C^BP tensor power n=%d at p=%d through degree %d (%s model)",
        n,
        p,
        max_degree,
        pseries.scheme,
    )
    cx = DegreewiseComplex(p=p, n=n, max_degree=max_degree, pseries=pseries)
    for d in range(0, max_degree + 1):
        basis = tuple(enumerate_basis(pseries, n, d)) if d >= n else ()
        cx.bases[d] = basis
        cx.indices[d] = {element: i for i, element in enumerate(basis)}

    degrees = tqdm(
        range(1, max_degree + 1),
        desc=f"assemble n={n}",
        disable=not progress,
        file=sys.stderr,
    )
    for d in degrees:
        target_index = cx.indices[d - 1]
        entries = {}
        for c, element in enumerate(cx.bases[d]):
            for target, value in boundary_of(pseries, element).items():
                if target.odd_count != element.odd_count + 1:
                    raise AssemblyError(
                        f"boundary of {element} leaves the odd_count+1 stratum"
                    )
                entries[(target_index[target], c)] = value
        cx.boundaries[d] = SparseMatrix(p, len(cx.bases[d - 1]), len(cx.bases[d]), entries)
        logger.debug(
            "degree %d: %d generators, %d boundary nonzeros", d, len(cx.bases[d]), len(entries)
        )

    for d in range(2, max_degree + 1):
        if not (cx.boundaries[d - 1] @ cx.boundaries[d]).is_zero():
            raise AssemblyError(f"boundary squares to a nonzero map in degree {d}")
    return cx


def chain_vector(cx: DegreewiseComplex, terms: Sequence[Tuple[ChainBasisElement, int]]) -> SparseVector:
    """Sparse vector from (basis element, coefficient) pairs of one degree."""
    vector: SparseVector = {}
    for element, coefficient in terms:
        add_scaled(vector, cx.vector_of(element), Fraction(coefficient))
    return vector
