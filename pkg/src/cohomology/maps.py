# src/cohomology/maps.py
# Purpose: pullbacks along linear maps of classifying spaces
"""Ring maps induced by linear maps (Z/p)^k -> (Z/p)^a x (CP^infinity)^b.

A linear map with matrix M (one row per target slot) pulls back
s_i to sum_j M_ij s_j and t_i to sum_j M_ij t_j. The inserted
coordinates of an AlgebraMapSpec land in CP^infinity slots, where only
the t class exists.
"""

from dataclasses import dataclass
from typing import List, Tuple

from src.cohomology.rings import LENS, PROJECTIVE, CohomologyElement, CohomologyRing
from src.utils.error_handler import MalformedMapError


@dataclass(frozen=True)
class AlgebraMapSpec:
    """phi(x_1..x_k) = (x_1..x_{delta_1}, y_1, x_{delta_1+1}, ..., y_l, ...).

    y_j = sum_{i <= delta_j} lambdas[j][i] x_i sits at position delta_j + j
    (1-based) of the target, which has rank n = k + l.
    """

    n: int
    k: int
    deltas: Tuple[int, ...]
    lambdas: Tuple[Tuple[int, ...], ...]
    p: int

    def __post_init__(self):
        deltas, lambdas = tuple(self.deltas), tuple(tuple(row) for row in self.lambdas)
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "lambdas", lambdas)
        if self.n != self.k + len(deltas):
            raise MalformedMapError(
                f"target rank {self.n} must be k + number of insertions = {self.k + len(deltas)}"
            )
        if len(lambdas) != len(deltas):
            raise MalformedMapError("one coefficient row per insertion")
        previous = 1
        for delta, row in zip(deltas, lambdas):
            if not previous <= delta <= self.k:
                raise MalformedMapError(f"deltas must satisfy 1 <= d_1 <= ... <= k, got {deltas}")
            previous = delta
            if len(row) != delta:
                raise MalformedMapError(f"coefficient row {row} needs {delta} entries")
            if any(not 0 <= value < self.p for value in row):
                raise MalformedMapError(f"coefficients must lie in 0..{self.p - 1}, got {row}")

    @property
    def positions(self) -> Tuple[int, ...]:
        """0-based target positions of the inserted coordinates."""
        return tuple(delta + j for j, delta in enumerate(self.deltas))

    def matrix(self) -> List[List[int]]:
        rows: List[List[int]] = []
        inserted = dict(zip(self.positions, self.lambdas))
        source = 0
        for position in range(self.n):
            if position in inserted:
                row = list(inserted[position]) + [0] * (self.k - len(inserted[position]))
            else:
                row = [int(i == source) for i in range(self.k)]
                source += 1
            rows.append(row)
        return rows

    def target_ring(self) -> CohomologyRing:
        inserted = set(self.positions)
        return CohomologyRing(
            self.p, tuple(PROJECTIVE if i in inserted else LENS for i in range(self.n))
        )

    def source_ring(self) -> CohomologyRing:
        return CohomologyRing.elementary(self.p, self.k)


@dataclass(frozen=True)
class LinearRingMap:
    """Pullback H^*(target) -> H^*(source) along a linear matrix."""

    source: CohomologyRing
    target: CohomologyRing
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        matrix = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        if len(matrix) != self.target.rank or any(len(r) != self.source.rank for r in matrix):
            raise MalformedMapError(
                f"matrix must be {self.target.rank}x{self.source.rank}"
            )
        if self.source.p != self.target.p:
            raise MalformedMapError("source and target rings use different primes")

    @classmethod
    def from_spec(cls, spec: AlgebraMapSpec) -> "LinearRingMap":
        return cls(spec.source_ring(), spec.target_ring(), tuple(map(tuple, spec.matrix())))

    def _linear_form(self, i: int, generator) -> CohomologyElement:
        result = self.source.zero()
        for j, coefficient in enumerate(self.matrix[i]):
            if coefficient % self.source.p:
                result = result + generator(j).scale(coefficient)
        return result

    def image_of_t(self, i: int) -> CohomologyElement:
        if not self.target.has_t(i):
            raise MalformedMapError(f"target slot {i + 1} has no t class")
        return self._linear_form(i, self.source.t)

    def image_of_s(self, i: int) -> CohomologyElement:
        if not self.target.has_s(i):
            raise MalformedMapError(f"target slot {i + 1} is CP^infinity and has no s class")
        return self._linear_form(i, self.source.s)


def pullback(ring_map: LinearRingMap, element: CohomologyElement) -> CohomologyElement:
    """Image of an element of the target ring, computed as a ring map.

    Raises:
        MalformedMapError: if element lives elsewhere or uses an s class in a
            CP^infinity slot
    """
    if element.ring != ring_map.target:
        raise MalformedMapError("element does not live in the map's target ring")
    total = ring_map.source.zero()
    for (t_exps, s_exps), coefficient in sorted(element.terms.items()):
        image = ring_map.source.one()
        for i, e in enumerate(t_exps):
            for _ in range(e):
                image = image * ring_map.image_of_t(i)
        for i, e in enumerate(s_exps):
            for _ in range(e):
                image = image * ring_map.image_of_s(i)
        total = total + image.scale(coefficient)
    return total


def diagonal_map(source: CohomologyRing, target: CohomologyRing) -> LinearRingMap:
    """Pullback along the diagonal Z/p -> (Z/p)^rank of target."""
    if source.rank != 1:
        raise MalformedMapError("the diagonal starts from a rank-one ring")
    return LinearRingMap(source, target, tuple((1,) for _ in range(target.rank)))


def identity_map(source: CohomologyRing, target: CohomologyRing) -> LinearRingMap:
    if source.rank != target.rank:
        raise MalformedMapError("identity needs rings of equal rank")
    rank = source.rank
    return LinearRingMap(
        source, target, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
    )
