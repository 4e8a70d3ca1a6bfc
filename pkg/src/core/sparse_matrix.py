# src/core/sparse_matrix.py
# Purpose: immutable sparse matrices over Z_(p)
"""Sparse matrices and vectors over the local ring Z_(p).

Vectors are dictionaries ``{index: Fraction}`` with zero entries absent;
public entry points also accept dense sequences. Matrices are immutable
after construction; derived row and column maps are computed lazily.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from src.core.scalars import ScalarLike, to_scalar
from src.utils.error_handler import DimensionMismatchError

SparseVector = Dict[int, Fraction]
VectorLike = Union[Mapping[int, ScalarLike], Sequence[ScalarLike]]


def as_sparse_vector(vector: VectorLike, length: int, p: int) -> SparseVector:
    """Normalize a dense or sparse vector of the given length.

    Raises:
        DimensionMismatchError: wrong length or out-of-range index
    """
    if isinstance(vector, Mapping):
        items = vector.items()
        for index in vector:
            if not 0 <= index < length:
                raise DimensionMismatchError(
                    f"vector index {index} outside range 0..{length - 1}"
                )
    else:
        if len(vector) != length:
            raise DimensionMismatchError(
                f"vector has length {len(vector)}, expected {length}"
            )
        items = enumerate(vector)
    return {i: to_scalar(v, p) for i, v in items if v != 0}


def to_dense_vector(vector: Mapping[int, Fraction], length: int) -> List[Fraction]:
    dense = [Fraction(0)] * length
    for index, value in vector.items():
        dense[index] = value
    return dense


def add_scaled(target: SparseVector, source: Mapping[int, Fraction], factor: Fraction):
    """target += factor * source, in place, dropping cancelled entries."""
    if factor == 0:
        return
    for index, value in source.items():
        updated = target.get(index, 0) + factor * value
        if updated:
            target[index] = updated
        else:
            target.pop(index, None)


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable sparse matrix; columns are the images of basis vectors."""

    p: int
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Fraction] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        p: int,
        rows: int,
        cols: int,
        entries: Mapping[Tuple[int, int], ScalarLike],
    ) -> "SparseMatrix":
        """Validated constructor: indices in range, scalars p-local, zeros dropped."""
        clean = {}
        for (r, c), value in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise DimensionMismatchError(
                    f"entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )
            if value != 0:
                clean[(r, c)] = to_scalar(value, p)
        return cls(p, rows, cols, clean)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "SparseMatrix":
        return cls(p, rows, cols, {})

    @classmethod
    def identity(cls, p: int, size: int) -> "SparseMatrix":
        return cls(p, size, size, {(i, i): Fraction(1) for i in range(size)})

    @classmethod
    def from_dense(cls, p: int, dense: Sequence[Sequence[ScalarLike]]) -> "SparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {}
        for r, row in enumerate(dense):
            if len(row) != cols:
                raise DimensionMismatchError("ragged dense matrix")
            for c, value in enumerate(row):
                if value != 0:
                    entries[(r, c)] = value
        return cls.build(p, rows, cols, entries)

    @classmethod
    def from_columns(
        cls, p: int, rows: int, columns: Sequence[Mapping[int, ScalarLike]]
    ) -> "SparseMatrix":
        """Matrix whose c-th column is the sparse vector columns[c]."""
        entries = {}
        for c, column in enumerate(columns):
            for r, value in column.items():
                if value != 0:
                    entries[(r, c)] = value
        return cls.build(p, rows, len(columns), entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    @cached_property
    def row_map(self) -> Dict[int, Dict[int, Fraction]]:
        result: Dict[int, Dict[int, Fraction]] = {}
        for (r, c), value in self.entries.items():
            result.setdefault(r, {})[c] = value
        return result

    @cached_property
    def column_map(self) -> Dict[int, Dict[int, Fraction]]:
        result: Dict[int, Dict[int, Fraction]] = {}
        for (r, c), value in self.entries.items():
            result.setdefault(c, {})[r] = value
        return result

    def entry(self, row: int, col: int) -> Fraction:
        return self.entries.get((row, col), Fraction(0))

    def column(self, col: int) -> SparseVector:
        return dict(self.column_map.get(col, {}))

    def columns(self) -> List[SparseVector]:
        return [self.column(c) for c in range(self.cols)]

    def row(self, row: int) -> SparseVector:
        return dict(self.row_map.get(row, {}))

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), value in self.entries.items():
            dense[r][c] = value
        return dense

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.p, self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def apply(self, vector: VectorLike) -> SparseVector:
        """Matrix-vector product, returned sparse."""
        vector = as_sparse_vector(vector, self.cols, self.p)
        result: SparseVector = {}
        for c, value in vector.items():
            add_scaled(result, self.column_map.get(c, {}), value)
        return result

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        entries: Dict[Tuple[int, int], Fraction] = {}
        columns = self.column_map
        for c, column in other.column_map.items():
            accumulated: SparseVector = {}
            for k, value in column.items():
                add_scaled(accumulated, columns.get(k, {}), value)
            for r, value in accumulated.items():
                entries[(r, c)] = value
        return SparseMatrix(self.p, self.rows, other.cols, entries)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self.matmul(other)

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        """Block matrix [self | other]."""
        if self.rows != other.rows:
            raise DimensionMismatchError("hstack needs equal row counts")
        entries = dict(self.entries)
        for (r, c), value in other.entries.items():
            entries[(r, c + self.cols)] = value
        return SparseMatrix(self.p, self.rows, self.cols + other.cols, entries)

    def select_columns(self, indices: Sequence[int]) -> "SparseMatrix":
        columns = self.column_map
        return SparseMatrix.from_columns(
            self.p, self.rows, [columns.get(c, {}) for c in indices]
        )

    def select_rows(self, indices: Sequence[int]) -> "SparseMatrix":
        position = {r: i for i, r in enumerate(indices)}
        entries = {
            (position[r], c): v for (r, c), v in self.entries.items() if r in position
        }
        return SparseMatrix(self.p, len(indices), self.cols, entries)

    def permuted(
        self, row_order: Iterable[int], col_order: Iterable[int]
    ) -> "SparseMatrix":
        """Matrix with rows and columns listed in the given orders."""
        row_pos = {r: i for i, r in enumerate(row_order)}
        col_pos = {c: i for i, c in enumerate(col_order)}
        return SparseMatrix(
            self.p,
            self.rows,
            self.cols,
            {(row_pos[r], col_pos[c]): v for (r, c), v in self.entries.items()},
        )
