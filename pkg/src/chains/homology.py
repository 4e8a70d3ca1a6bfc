# src/chains/homology.py
# Purpose: homology of an assembled complex, total and by odd_count
"""Homology tables of DegreewiseComplex instances.

Degree d homology needs the boundary out of degree d+1, so with bound D
only degrees 1..D-1 are reported; asking for more is an error.
"""

import sys
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from tqdm import tqdm

from src.chains.complex import DegreewiseComplex
from src.core.finite_group import FinitePGroup
from src.core.smith import SubquotientData, image_membership, subquotient_structure
from src.core.sparse_matrix import SparseVector, VectorLike, as_sparse_vector
from src.utils.error_handler import AssemblyError, DegreeBoundError, PreconditionError
from src.utils.logging_factory import LoggingFactory

logger = LoggingFactory.get_logger(__name__)


@dataclass(frozen=True)
class HomologyClass:
    """A cycle together with its coordinates in homology."""

    degree: int
    vector: SparseVector
    coordinates: Tuple

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coordinates)


@dataclass
class HomologyTable:
    p: int
    n: int
    max_degree: int
    scheme: str
    groups: Dict[int, FinitePGroup] = field(default_factory=dict)
    data: Dict[int, SubquotientData] = field(default_factory=dict)
    bigraded: Optional[Dict[Tuple[int, int], FinitePGroup]] = None

    @property
    def window(self) -> Tuple[int, int]:
        return (1, self.max_degree - 1)

    def group(self, degree: int) -> FinitePGroup:
        if degree not in self.groups:
            raise DegreeBoundError(
                f"homology in degree {degree} not computed (window {self.window})"
            )
        return self.groups[degree]

    def class_of(self, degree: int, cycle: VectorLike) -> HomologyClass:
        data = self.data[degree]
        vector = as_sparse_vector(cycle, data.coordinate_map.cols, self.p)
        return HomologyClass(degree, vector, data.coordinates(vector))

    def to_dict(self) -> dict:
        rows = []
        if self.bigraded is not None:
            for degree in sorted(self.groups):
                pieces = [
                    (k, g)
                    for (d, k), g in sorted(self.bigraded.items())
                    if d == degree and not g.is_zero
                ]
                if not pieces:
                    rows.append({"degree": degree, "odd_count": None, "exponents": []})
                for k, g in pieces:
                    rows.append(
                        {"degree": degree, "odd_count": k, "exponents": list(g.exponents)}
                    )
        else:
            for degree in sorted(self.groups):
                rows.append(
                    {
                        "degree": degree,
                        "odd_count": None,
                        "exponents": list(self.groups[degree].exponents),
                    }
                )
        return {
            "p": self.p,
            "n": self.n,
            "degree_bound": self.max_degree,
            "rows": rows,
        }


def _check_degrees(cx: DegreewiseComplex, degrees: Optional[Iterable[int]]):
    low, high = cx.homology_window
    if degrees is None:
        return list(range(low, high + 1))
    degrees = list(degrees)
    for d in degrees:
        if d < 1 or d > high:
            raise DegreeBoundError(
                f"homology in degree {d} needs max_degree >= {d + 1} "
                f"(assembled through {cx.max_degree})"
            )
    return degrees


def homology_table(
    cx: DegreewiseComplex,
    degrees: Optional[Iterable[int]] = None,
    progress: bool = False,
) -> HomologyTable:
    """Per-degree ker(d_d)/im(d_{d+1}) with representatives retained.

    Raises:
        DegreeBoundError: for degrees outside 1..D-1
    """
    degrees = _check_degrees(cx, degrees)
    table = HomologyTable(cx.p, cx.n, cx.max_degree, cx.pseries.scheme)
    logger.info(
        "Computing homology for n=%d at p=%d over %d degrees", cx.n, cx.p, len(degrees)
    )
    for d in tqdm(degrees, desc="homology", disable=not progress, file=sys.stderr):
        data = subquotient_structure(cx.boundary(d), cx.boundary(d + 1))
        table.groups[d] = data.structure
        table.data[d] = data
        if data.structure.free_rank:
            logger.error(
                "degree %d homology has free rank %d; reduced homology must be torsion",
                d,
                data.structure.free_rank,
            )
    return table


def _stratum_piece(cx: DegreewiseComplex, degree: int, k: int) -> FinitePGroup:
    here = cx.strata(degree).get(k, [])
    if not here:
        return FinitePGroup.zero(cx.p)
    above = cx.strata(degree + 1).get(k - 1, [])
    below = cx.strata(degree - 1).get(k + 1, []) if degree >= 1 else []
    outgoing = cx.boundary(degree).select_rows(below).select_columns(here)
    incoming = cx.boundary(degree + 1).select_rows(here).select_columns(above)
    return subquotient_structure(outgoing, incoming).structure


def bigraded_homology(
    cx: DegreewiseComplex,
    table: Optional[HomologyTable] = None,
    degrees: Optional[Iterable[int]] = None,
    progress: bool = False,
) -> Dict[Tuple[int, int], FinitePGroup]:
    """(degree, odd_count) -> homology of that stratum.

    The differential raises odd_count by exactly one, so kernels and images
    split by stratum; the pieces of each degree must add up to the total.

    Raises:
        AssemblyError: if the strata do not add up to the total homology
    """
    degrees = _check_degrees(cx, degrees)
    table = table or homology_table(cx, degrees, progress)
    pieces: Dict[Tuple[int, int], FinitePGroup] = {}
    for d in tqdm(degrees, desc="bigraded", disable=not progress, file=sys.stderr):
        total = FinitePGroup.zero(cx.p)
        for k in range(0, cx.n + 1):
            piece = _stratum_piece(cx, d, k)
            pieces[(d, k)] = piece
            total = total + piece
        if total != table.group(d):
            raise AssemblyError(
                f"odd_count strata in degree {d} sum to {total.describe()}, "
                f"total homology is {table.group(d).describe()}"
            )
    table.bigraded = pieces
    return pieces


def is_zero_in_homology(cx: DegreewiseComplex, z: VectorLike, degree: int) -> bool:
    """True iff the cycle z lies in the image of d_{degree+1}.

    Raises:
        PreconditionError: if z is not a cycle
        DegreeBoundError: if degree+1 exceeds the assembled bound
    """
    vector = as_sparse_vector(z, cx.dimension(degree), cx.p)
    if cx.boundary(degree).apply(vector):
        raise PreconditionError(f"vector in degree {degree} is not a cycle")
    return image_membership(cx.boundary(degree + 1), vector) is not None
