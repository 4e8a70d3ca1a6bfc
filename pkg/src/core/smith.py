# src/core/smith.py
# Purpose: Smith normal form over Z_(p) and the linear algebra built on it
"""Smith normal form over the discrete valuation ring Z_(p).

Pivot rule: among the remaining entries of minimal p-valuation, take the
lexicographically smallest (row, col). The minimal valuation never drops
during elimination, so the search scans rows in order and stops at the
first entry of the current minimum.

After the pivot column is cleared by row operations, the column operations
that clear the pivot row touch nothing but that row. They are recorded in
the right transform and the pivot row and column are retired.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.core.finite_group import FinitePGroup
from src.core.scalars import residue, valuation
from src.core.sparse_matrix import (
    SparseMatrix,
    SparseVector,
    VectorLike,
    add_scaled,
    as_sparse_vector,
    to_dense_vector,
)
from src.utils.error_handler import ComposabilityError, DimensionMismatchError
from src.utils.logging_factory import LoggingFactory

logger = LoggingFactory.get_logger(__name__)


@dataclass(frozen=True)
class SmithDecomposition:
    """left @ A @ right == diag(diagonal), with rank nonzero diagonal entries.

    Diagonal valuations are nondecreasing. The inverses of both transforms
    are kept so coordinates can be moved in either direction.
    """

    p: int
    source: SparseMatrix
    diagonal: Tuple[Fraction, ...]
    left_transform: SparseMatrix
    left_inverse: SparseMatrix
    right_transform: SparseMatrix
    right_inverse: SparseMatrix

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def valuations(self) -> Tuple[int, ...]:
        return tuple(valuation(d, self.p) for d in self.diagonal)

    def diagonal_matrix(self) -> SparseMatrix:
        entries = {(i, i): d for i, d in enumerate(self.diagonal)}
        return SparseMatrix(self.p, self.source.rows, self.source.cols, entries)

    def verify(self) -> bool:
        """Exact check of left·A·right == D."""
        product = self.left_transform @ self.source @ self.right_transform
        return product.entries == self.diagonal_matrix().entries


def _find_pivot(
    work: Dict[int, Dict[int, Fraction]], p: int, floor: int
) -> Optional[Tuple[int, int, int]]:
    best = None
    for r in sorted(work):
        row = work[r]
        for c in sorted(row):
            v = valuation(row[c], p)
            if best is None or v < best[2]:
                best = (r, c, v)
                if v <= floor:
                    return best
    return best


def smith_normal_form(matrix: SparseMatrix) -> SmithDecomposition:
    """Deterministic Smith normal form over Z_(p).

    Args:
        matrix: matrix over Z_(p)

    Returns:
        SmithDecomposition satisfying left·A·right = diag with nondecreasing
        diagonal valuations

    Example:
        snf = smith_normal_form(SparseMatrix.from_dense(3, [[3, 3], [3, 12]]))
        snf.valuations == (1, 2)
    """
    p = matrix.p
    rows, cols = matrix.rows, matrix.cols

    work: Dict[int, Dict[int, Fraction]] = {
        r: dict(row) for r, row in matrix.row_map.items() if row
    }
    col_index: Dict[int, set] = {}
    for r, row in work.items():
        for c in row:
            col_index.setdefault(c, set()).add(r)

    left_rows: Dict[int, SparseVector] = {r: {r: Fraction(1)} for r in range(rows)}
    left_inv_cols: Dict[int, SparseVector] = {r: {r: Fraction(1)} for r in range(rows)}
    right_cols: Dict[int, SparseVector] = {c: {c: Fraction(1)} for c in range(cols)}
    right_inv_rows: Dict[int, SparseVector] = {c: {c: Fraction(1)} for c in range(cols)}

    pivots: List[Tuple[int, int, Fraction]] = []
    floor = 0

    while work:
        r, c, floor = _find_pivot(work, p, floor)
        pivot_row = work.pop(r)
        d = pivot_row[c]

        for k in pivot_row:
            col_index[k].discard(r)

        # clear column c below and above the pivot with row operations
        for j in sorted(col_index.get(c, ())):
            row_j = work[j]
            factor = row_j[c] / d
            for k, value in pivot_row.items():
                updated = row_j.get(k, 0) - factor * value
                if updated:
                    if k not in row_j:
                        col_index.setdefault(k, set()).add(j)
                    row_j[k] = updated
                else:
                    row_j.pop(k, None)
                    col_index[k].discard(j)
            if not row_j:
                del work[j]
            add_scaled(left_rows[j], left_rows[r], -factor)
            add_scaled(left_inv_cols[r], left_inv_cols[j], factor)
        col_index.pop(c, None)

        # column operations that clear the rest of the pivot row
        for k, value in pivot_row.items():
            if k == c:
                continue
            factor = value / d
            add_scaled(right_cols[k], right_cols[c], -factor)
            add_scaled(right_inv_rows[c], right_inv_rows[k], factor)

        pivots.append((r, c, d))

    pivot_rows = [r for r, _, _ in pivots]
    pivot_cols = [c for _, c, _ in pivots]
    used_rows, used_cols = set(pivot_rows), set(pivot_cols)
    row_order = pivot_rows + [r for r in range(rows) if r not in used_rows]
    col_order = pivot_cols + [c for c in range(cols) if c not in used_cols]

    left = SparseMatrix(
        p,
        rows,
        rows,
        {(i, k): v for i, r in enumerate(row_order) for k, v in left_rows[r].items()},
    )
    left_inverse = SparseMatrix(
        p,
        rows,
        rows,
        {(k, i): v for i, r in enumerate(row_order) for k, v in left_inv_cols[r].items()},
    )
    right = SparseMatrix(
        p,
        cols,
        cols,
        {(k, i): v for i, c in enumerate(col_order) for k, v in right_cols[c].items()},
    )
    right_inverse = SparseMatrix(
        p,
        cols,
        cols,
        {(i, k): v for i, c in enumerate(col_order) for k, v in right_inv_rows[c].items()},
    )

    logger.debug(
        "SNF of %dx%d matrix (%d nonzeros): rank %d", rows, cols, matrix.nnz, len(pivots)
    )
    return SmithDecomposition(
        p=p,
        source=matrix,
        diagonal=tuple(d for _, _, d in pivots),
        left_transform=left,
        left_inverse=left_inverse,
        right_transform=right,
        right_inverse=right_inverse,
    )


def cokernel_structure(matrix: SparseMatrix) -> FinitePGroup:
    """Isomorphism type of Z_(p)^rows / im(matrix); columns are relations."""
    snf = smith_normal_form(matrix)
    return FinitePGroup(matrix.p, snf.valuations, matrix.rows - snf.rank)


def kernel_basis(matrix: SparseMatrix) -> List[List[Fraction]]:
    """A Z_(p)-basis of ker(matrix), as dense vectors; empty when injective."""
    snf = smith_normal_form(matrix)
    right = snf.right_transform
    return [
        to_dense_vector(right.column(c), matrix.cols) for c in range(snf.rank, matrix.cols)
    ]


def _solve(snf: SmithDecomposition, vector: SparseVector) -> Optional[SparseVector]:
    p = snf.p
    transformed = snf.left_transform.apply(vector)
    solution: SparseVector = {}
    for i, w in transformed.items():
        if i >= snf.rank:
            return None
        d = snf.diagonal[i]
        if valuation(w, p) < valuation(d, p):
            return None
        solution[i] = w / d
    return snf.right_transform.apply(solution)


def image_membership(
    matrix: SparseMatrix, vector: VectorLike, snf: Optional[SmithDecomposition] = None
) -> Optional[List[Fraction]]:
    """Solve matrix·x = vector over Z_(p).

    Args:
        matrix: coefficient matrix
        vector: right-hand side, length = matrix.rows
        snf: precomputed decomposition of matrix, if available

    Returns:
        dense solution x, or None when vector is not in the Z_(p)-image

    Raises:
        DimensionMismatchError: if the vector length differs from matrix.rows
    """
    target = as_sparse_vector(vector, matrix.rows, matrix.p)
    snf = snf or smith_normal_form(matrix)
    solution = _solve(snf, target)
    if solution is None:
        return None
    return to_dense_vector(solution, matrix.cols)


@dataclass(frozen=True)
class SubquotientData:
    """ker(B)/im(A) together with the maps needed for class arithmetic.

    coordinate_map sends a cycle of B to its coordinates in the SNF basis of
    the quotient; torsion_slots lists (row, exponent) of the cyclic summands
    of order > 1 and free_slots the rows of free summands.
    """

    structure: FinitePGroup
    cycle_basis: Tuple[SparseVector, ...]
    coordinate_map: SparseMatrix
    torsion_slots: Tuple[Tuple[int, int], ...]
    free_slots: Tuple[int, ...]
    representatives: Tuple[SparseVector, ...]
    boundary: SparseMatrix

    def coordinates(self, cycle: VectorLike) -> Tuple:
        """Homology coordinates: residues mod p^e per cyclic summand, then free parts."""
        p = self.structure.p
        w = self.coordinate_map.apply(cycle)
        torsion = tuple(residue(w.get(i, 0), p, e) for i, e in self.torsion_slots)
        free = tuple(w.get(i, Fraction(0)) for i in self.free_slots)
        return torsion + free

    def is_zero_class(self, cycle: VectorLike) -> bool:
        return all(x == 0 for x in self.coordinates(cycle))


def subquotient_structure(
    outgoing: SparseMatrix, incoming: SparseMatrix
) -> SubquotientData:
    """ker(outgoing)/im(incoming), requiring outgoing·incoming = 0.

    The columns of incoming are written in the kernel basis of outgoing;
    the cokernel of that coordinate matrix is the subquotient.

    Raises:
        ComposabilityError: if outgoing·incoming is nonzero
        DimensionMismatchError: if the shapes do not chain
    """
    p = outgoing.p
    if outgoing.cols != incoming.rows:
        raise DimensionMismatchError(
            f"cannot compose {outgoing.rows}x{outgoing.cols} with "
            f"{incoming.rows}x{incoming.cols}"
        )
    if not (outgoing @ incoming).is_zero():
        raise ComposabilityError("B·A is nonzero; complex wrongly assembled")

    dim = outgoing.cols
    snf_b = smith_normal_form(outgoing)
    kernel_rows = list(range(snf_b.rank, dim))
    cycle_basis = tuple(snf_b.right_transform.column(c) for c in kernel_rows)

    to_kernel = snf_b.right_inverse.select_rows(kernel_rows)
    coordinates = to_kernel @ incoming
    snf_x = smith_normal_form(coordinates)

    coordinate_map = snf_x.left_transform @ to_kernel
    torsion_slots = []
    for i, e in enumerate(snf_x.valuations):
        if e > 0:
            torsion_slots.append((i, e))
    free_slots = tuple(range(snf_x.rank, len(kernel_rows)))

    kernel_matrix = SparseMatrix.from_columns(p, dim, list(cycle_basis))
    representatives = tuple(
        kernel_matrix.apply(snf_x.left_inverse.column(i))
        for i in [slot for slot, _ in torsion_slots] + list(free_slots)
    )

    structure = FinitePGroup(p, tuple(e for _, e in torsion_slots), len(free_slots))
    return SubquotientData(
        structure=structure,
        cycle_basis=cycle_basis,
        coordinate_map=coordinate_map,
        torsion_slots=tuple(torsion_slots),
        free_slots=free_slots,
        representatives=representatives,
        boundary=incoming,
    )


def span_coordinates(
    generators: SparseMatrix, members: SparseMatrix
) -> Tuple[SmithDecomposition, SparseMatrix]:
    """Coordinates of the columns of members in a basis of span(generators).

    The basis is L^{-1}(d_i e_i) for the SNF L·G·R = D; a member v has
    coordinates (L v)_i / d_i.

    Raises:
        ComposabilityError: if some member is outside span(generators)
    """
    if generators.rows != members.rows:
        raise DimensionMismatchError("span comparison needs equal ambient rank")
    p = generators.p
    snf = smith_normal_form(generators)
    transformed = snf.left_transform @ members
    entries = {}
    for (i, c), w in transformed.entries.items():
        if i >= snf.rank:
            raise ComposabilityError("member lies outside the generated span")
        q = w / snf.diagonal[i]
        if q.denominator % p == 0:
            raise ComposabilityError("member lies outside the generated span")
        entries[(i, c)] = q
    return snf, SparseMatrix(p, snf.rank, members.cols, entries)


def quotient_structure(big: SparseMatrix, small: SparseMatrix) -> FinitePGroup:
    """span(big)/span(small) for column spans with span(small) inside span(big)."""
    _, coordinates = span_coordinates(big, small)
    return cokernel_structure(coordinates)


def contains_span(big: SparseMatrix, small: SparseMatrix) -> bool:
    """True iff every column of small lies in the Z_(p)-span of big's columns."""
    snf = smith_normal_form(big)
    return all(_solve(snf, column) is not None for column in small.columns())


def preimage_lattice(lift: SparseMatrix, target_relations: SparseMatrix) -> SparseMatrix:
    """Columns spanning {x : lift·x in span(target_relations)}.

    x qualifies iff lift·x = target_relations·y for some y, so the lattice is
    the first-block projection of ker[lift | target_relations].
    """
    if lift.rows != target_relations.rows:
        raise DimensionMismatchError("lift and target relations disagree on rows")
    source_dim = lift.cols
    stacked = lift.hstack(target_relations)
    snf = smith_normal_form(stacked)
    kernel_columns = []
    for c in range(snf.rank, stacked.cols):
        column = snf.right_transform.column(c)
        kernel_columns.append({i: v for i, v in column.items() if i < source_dim})
    return SparseMatrix.from_columns(lift.p, source_dim, kernel_columns)


def induced_kernel(
    source_relations: SparseMatrix,
    target_relations: SparseMatrix,
    lift: SparseMatrix,
) -> FinitePGroup:
    """Kernel of coker(source_relations) -> coker(target_relations) induced by lift.

    The preimage lattice contains the source relations whenever the map is
    well defined; the kernel is their quotient.

    Raises:
        ComposabilityError: if lift does not carry source relations into the
            target relations
    """
    if lift.rows != target_relations.rows or lift.cols != source_relations.rows:
        raise DimensionMismatchError("lift does not match the presentations")
    lattice = preimage_lattice(lift, target_relations)
    return quotient_structure(lattice, source_relations)


def random_unimodular(p: int, size: int, rng, steps: int = 0) -> SparseMatrix:
    """Random invertible matrix over Z_(p) built from elementary operations.

    Args:
        p: prime
        size: dimension
        rng: numpy Generator used for the random choices
        steps: number of elementary operations (defaults to 3*size)
    """
    dense: List[List[Fraction]] = [
        [Fraction(int(i == j)) for j in range(size)] for i in range(size)
    ]
    for _ in range(steps or 3 * size):
        if size < 2:
            break
        i, j = (int(x) for x in rng.choice(size, size=2, replace=False))
        factor = Fraction(int(rng.integers(-3, 4)))
        for k in range(size):
            dense[i][k] += factor * dense[j][k]
    order = [int(x) for x in rng.permutation(size)]
    return SparseMatrix.from_dense(p, [dense[k] for k in order])
