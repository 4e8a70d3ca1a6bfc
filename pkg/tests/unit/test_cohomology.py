"""Unit tests for mod-p cohomology rings, pullbacks and rank checks."""

import numpy as np
import pytest

from src.cohomology.checks import (
    default_window,
    multi_factor_surjectivity,
    p2_counterexample,
    rank_mod_p,
    right_inverse_mod_p,
    stretch_check,
    vandermonde_determinant,
    vandermonde_surjectivity,
)
from src.cohomology.maps import AlgebraMapSpec, LinearRingMap, diagonal_map, pullback
from src.cohomology.rings import LENS, PROJECTIVE, CohomologyElement, CohomologyRing, cup_product
from src.core.verdict import Verdict
from src.utils.error_handler import MalformedMapError, PreconditionError


class TestCohomologyRing:
    """Test products in H^*(B(Z/p)^k; F_p)."""

    @pytest.fixture
    def ring(self):
        """Rank-two ring at p=3."""
        return CohomologyRing.elementary(3, 2)

    def test_exterior_classes_square_to_zero(self, ring):
        """Test s_i^2 = 0 for odd p."""
        assert (ring.s(0) * ring.s(0)).is_zero()

    def test_graded_commutativity(self, ring):
        """Test s1 s2 = -s2 s1."""
        assert (ring.s(0) * ring.s(1) + ring.s(1) * ring.s(0)).is_zero()
        assert not (ring.s(0) * ring.s(1)).is_zero()

    def test_polynomial_classes(self, ring):
        """Test t classes multiply freely."""
        assert ring.t(0) * ring.t(0) == ring.monomial((2, 0), (0, 0))
        assert str(ring.t(0) * ring.s(1)) == "t1*s2"

    def test_basis_sizes(self, ring):
        """Test the low-degree bases."""
        assert len(ring.basis(1)) == 2
        assert len(ring.basis(2)) == 3

    def test_coefficients_reduce_mod_p(self, ring):
        """Test scaling wraps modulo p."""
        assert ring.s(0).scale(3).is_zero()
        assert ring.s(0).scale(4) == ring.s(0)

    def test_mismatched_rings(self, ring):
        """Test products across rings raise."""
        other = CohomologyRing.elementary(3, 1)
        with pytest.raises(PreconditionError):
            cup_product(ring.s(0), other.s(0))

    def test_random_products_associate(self):
        """Test (ab)c = a(bc) and ab = (-1)^(|a||b|) ba on random elements."""
        ring = CohomologyRing.elementary(3, 3)
        rng = np.random.default_rng(23)

        def random_element(degree):
            basis = ring.basis(degree)
            picks = rng.choice(len(basis), size=min(3, len(basis)), replace=False)
            return CohomologyElement(ring, {basis[int(i)]: int(rng.integers(1, 3)) for i in picks})

        for _ in range(20):
            a, b, c = (random_element(int(d)) for d in rng.integers(1, 5, size=3))
            assert (a * b) * c == a * (b * c)
            sign = -1 if a.degree * b.degree % 2 else 1
            assert a * b == (b * a).scale(sign)

    def test_p2_truncation(self):
        """Test F_2[s]/(s^4) and the missing t classes at p=2."""
        lens = CohomologyRing.elementary(2, 1, truncation=4)
        s = lens.s(0)
        assert not (s * s * s).is_zero()
        assert (s * s * s * s).is_zero()
        with pytest.raises(MalformedMapError):
            lens.t(0)


class TestPullbacks:
    """Test ring maps induced by linear maps."""

    @pytest.fixture
    def spec(self):
        """phi(x) = (x, 2x) into B(Z/3) x CP^infinity."""
        return AlgebraMapSpec(n=2, k=1, deltas=(1,), lambdas=((2,),), p=3)

    def test_target_slots(self, spec):
        """Test the inserted coordinate is a CP^infinity slot."""
        assert spec.positions == (1,)
        assert spec.target_ring().slots == (LENS, PROJECTIVE)
        assert spec.matrix() == [[1], [2]]

    def test_pullback_of_t(self, spec):
        """Test t_2 pulls back to 2 t_1 and s_1 t_2^2 to s_1 t_1^2."""
        ring_map = LinearRingMap.from_spec(spec)
        target, source = spec.target_ring(), spec.source_ring()
        assert pullback(ring_map, target.t(1)) == source.t(0).scale(2)
        element = target.s(0) * target.t(1) * target.t(1)
        assert pullback(ring_map, element) == source.s(0) * source.t(0) * source.t(0)

    def test_pullback_is_multiplicative(self, spec):
        """Test pullback(a b) = pullback(a) pullback(b)."""
        ring_map = LinearRingMap.from_spec(spec)
        target = spec.target_ring()
        a = target.t(0) + target.t(1)
        b = target.s(0) * target.t(1)
        assert pullback(ring_map, a * b) == pullback(ring_map, a) * pullback(ring_map, b)

    def test_no_s_class_in_cp_slot(self, spec):
        """Test CP^infinity slots carry no s class."""
        with pytest.raises(MalformedMapError):
            spec.target_ring().s(1)

    def test_foreign_element(self, spec):
        """Test pulling back an element of another ring raises."""
        ring_map = LinearRingMap.from_spec(spec)
        with pytest.raises(MalformedMapError):
            pullback(ring_map, CohomologyRing.elementary(3, 2).s(0))

    def test_invalid_specs(self):
        """Test malformed map specifications are refused."""
        with pytest.raises(MalformedMapError):
            AlgebraMapSpec(n=3, k=1, deltas=(1,), lambdas=((1,),), p=3)
        with pytest.raises(MalformedMapError):
            AlgebraMapSpec(n=2, k=1, deltas=(1,), lambdas=((3,),), p=3)
        with pytest.raises(MalformedMapError):
            AlgebraMapSpec(n=2, k=1, deltas=(2,), lambdas=((1, 1),), p=3)

    def test_diagonal(self):
        """Test the diagonal sends each s_i to s."""
        source = CohomologyRing.elementary(3, 1)
        target = CohomologyRing.elementary(3, 2)
        ring_map = diagonal_map(source, target)
        assert pullback(ring_map, target.s(1)) == source.s(0)
        assert pullback(ring_map, target.s(0) * target.s(1)).is_zero()


class TestRankChecks:
    """Test Vandermonde surjectivity and the stretch vanishing."""

    def test_rank_mod_p(self):
        """Test ranks over F_p."""
        assert rank_mod_p([[1, 2], [2, 4]], 3) == 1
        assert rank_mod_p([[1, 0], [0, 3]], 3) == 1
        assert rank_mod_p([], 3) == 0

    def test_right_inverse(self):
        """Test the right inverse multiplies back to the identity mod p."""
        matrix = [[1, 2, 0], [0, 1, 1]]
        solution = right_inverse_mod_p(matrix, 3)
        assert len(solution) == 3
        for i, row in enumerate(matrix):
            products = [sum(row[t] * solution[t][j] for t in range(3)) % 3 for j in range(2)]
            assert products == [int(i == j) for j in range(2)]

    def test_right_inverse_missing(self):
        """Test dependent rows have no right inverse."""
        assert right_inverse_mod_p([[1, 2], [2, 4]], 3) is None
        assert right_inverse_mod_p([[3, 0], [0, 1]], 3) is None
        assert right_inverse_mod_p([], 3) is None

    def test_default_window(self):
        """Test the window reaches past the top class."""
        assert default_window(3, 1) == 7
        assert default_window(3, 2) == 20

    def test_vandermonde_p3_k1(self):
        """Test full rank in every degree for p=3, k=1."""
        report = vandermonde_surjectivity(3, 1)
        assert report.cells
        assert report.verdict == Verdict.PASS
        assert report.values == "counts"
        assert any("determinant" in c.name for c in report.checks)
        assert all(c.note == "right inverse verified" for c in report.cells)

    def test_vandermonde_window_below_first_degree(self):
        """Test a window ending before degree k + 2 is refused."""
        with pytest.raises(PreconditionError):
            vandermonde_surjectivity(3, 1, window=1)
        report = vandermonde_surjectivity(3, 1, window=3)
        assert [c.degree for c in report.cells] == [3]
        assert report.verdict == Verdict.PASS

    def test_vandermonde_determinant(self):
        """Test the determinant matches the product of differences up to sign."""
        assert vandermonde_determinant(3, 1).verdict == Verdict.PASS

    def test_vandermonde_rejects_p2(self):
        """Test the check is for odd primes."""
        with pytest.raises(PreconditionError):
            vandermonde_surjectivity(2, 1)

    def test_multi_factor(self):
        """Test repeated deltas are checked once."""
        report = multi_factor_surjectivity(3, [1, 1])
        assert report.verdict == Verdict.PASS
        assert {c.bucket for c in report.cells} == {"delta=1"}

    def test_stretch_vanishes(self):
        """Test threefold products of degree-one classes vanish for k=2."""
        report = stretch_check(3, 2, 3, trials=10, seed=1)
        assert report.verdict == Verdict.PASS

    def test_stretch_negative_control(self):
        """Test n <= k leaves a nonzero product."""
        report = stretch_check(3, 1, 1, trials=5, seed=1)
        assert report.verdict == Verdict.FAIL

    def test_stretch_rejects_p2(self):
        """Test the stretch check needs an odd prime."""
        with pytest.raises(PreconditionError):
            stretch_check(2, 2, 3)


class TestP2Counterexample:
    """Test the p=2 pullback computation."""

    def test_all_pullbacks_nonzero(self):
        """Test the diagonal and toral pullbacks of s1 s2 s3 are nonzero."""
        report = p2_counterexample()
        assert len(report.checks) == 3
        assert report.verdict == Verdict.PASS
        assert "toral class" in report.parameters["conclusion"]
