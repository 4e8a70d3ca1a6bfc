"""Unit tests for chain assembly, homology and chain-level operators."""

import numpy as np
import pytest

from src.chains.complex import ChainBasisElement, assemble_complex, chain_vector, compositions
from src.chains.homology import bigraded_homology, homology_table, is_zero_in_homology
from src.chains.operators import (
    cap_with_t,
    induced_multiplication,
    multiply_chain,
    multiply_class,
    toral_class,
)
from src.coefficients.pseries import compute_p_series
from src.core.finite_group import FinitePGroup
from src.core.smith import subquotient_structure
from src.utils.error_handler import DegreeBoundError, PreconditionError


def z(p, *exponents):
    return FinitePGroup(p, tuple(exponents))


class TestAssembly:
    """Test bases and boundary matrices."""

    def test_compositions(self):
        """Test ordered positive compositions."""
        assert compositions(3, 2) == ((1, 2), (2, 1))
        assert compositions(1, 2) == ()

    def test_single_factor_boundary(self, pseries_3_12):
        """Test d(c2) = 3 c1."""
        cx = assemble_complex(3, 1, 6, pseries_3_12)
        one = cx.table.one()
        c1 = cx.index_of(ChainBasisElement(one, (1,)))
        c2 = cx.index_of(ChainBasisElement(one, (2,)))
        assert cx.boundary(2).entry(c1, c2) == 3
        assert cx.boundary(3).is_zero()

    def test_koszul_sign(self, pseries_3_12):
        """Test d(c1 (x) c2) = -3 c1 (x) c1."""
        cx = assemble_complex(3, 2, 6, pseries_3_12)
        one = cx.table.one()
        source = cx.index_of(ChainBasisElement(one, (1, 2)))
        target = cx.index_of(ChainBasisElement(one, (1, 1)))
        assert cx.boundary(3).column(source) == {target: -3}

    def test_p_series_coefficients_enter(self, pseries_3_12):
        """Test d(c6) picks up a_2 = -8 v1 on c1."""
        cx = assemble_complex(3, 1, 6, pseries_3_12)
        one = cx.table.one()
        v1 = cx.table.generator(1)
        column = cx.boundary(6).column(cx.index_of(ChainBasisElement(one, (6,))))
        assert column[cx.index_of(ChainBasisElement(v1, (1,)))] == -8
        assert column[cx.index_of(ChainBasisElement(one, (5,)))] == 3

    def test_degrees_below_n_are_empty(self, pseries_3_12):
        """Test C_d = 0 for d < n."""
        cx = assemble_complex(3, 3, 6, pseries_3_12)
        assert cx.dimension(2) == 0
        assert cx.dimension(3) == 1

    def test_short_p_series_rejected(self, pseries_3_12):
        """Test the p-series must cover the assembled range."""
        with pytest.raises(DegreeBoundError):
            assemble_complex(3, 1, 14, pseries_3_12)

    def test_zero_factors_rejected(self, pseries_3_12):
        """Test n must be positive."""
        with pytest.raises(PreconditionError):
            assemble_complex(3, 0, 6, pseries_3_12)


class TestHomology:
    """Test homology tables against known groups."""

    @pytest.fixture
    def single(self, pseries_3_12):
        """Homology of C^BP at p=3 through degree 9."""
        cx = assemble_complex(3, 1, 10, pseries_3_12)
        return cx, homology_table(cx)

    def test_known_groups_n1(self, single):
        """Test H_1 = Z/3, H_3 = Z/3, H_5 = H_7 = Z/9 and even degrees vanish."""
        _, table = single
        assert table.group(1) == z(3, 1)
        assert table.group(3) == z(3, 1)
        assert table.group(5) == z(3, 2)
        assert table.group(7) == z(3, 2)
        assert all(table.group(d).is_zero for d in (2, 4, 6, 8))

    def test_window(self, single):
        """Test degrees outside 1..D-1 are refused."""
        cx, table = single
        assert table.window == (1, 9)
        with pytest.raises(DegreeBoundError):
            table.group(10)
        with pytest.raises(DegreeBoundError):
            homology_table(cx, degrees=[10])

    def test_two_factors_degree_two(self, pseries_3_12):
        """Test H_2 of the twofold complex is Z/3, all in odd_count 2."""
        cx = assemble_complex(3, 2, 6, pseries_3_12)
        table = homology_table(cx)
        pieces = bigraded_homology(cx, table)
        assert table.group(2) == z(3, 1)
        assert pieces[(2, 2)] == z(3, 1)
        assert pieces[(2, 1)].is_zero and pieces[(2, 0)].is_zero
        assert table.bigraded is pieces

    def test_bigraded_rows(self, pseries_3_12):
        """Test serialised rows list odd_count when bigraded."""
        cx = assemble_complex(3, 1, 4, pseries_3_12)
        table = homology_table(cx)
        bigraded_homology(cx, table)
        rows = table.to_dict()["rows"]
        assert rows[0] == {"degree": 1, "odd_count": 1, "exponents": [1]}
        assert rows[1] == {"degree": 2, "odd_count": None, "exponents": []}

    def test_zero_in_homology(self, pseries_3_12):
        """Test c1 (x) c1 is not a boundary, 3 c1 (x) c1 is."""
        cx = assemble_complex(3, 2, 6, pseries_3_12)
        element = ChainBasisElement(cx.table.one(), (1, 1))
        assert not is_zero_in_homology(cx, cx.vector_of(element), 2)
        assert is_zero_in_homology(cx, chain_vector(cx, [(element, 3)]), 2)
        assert is_zero_in_homology(cx, {}, 2)

    def test_non_cycle_rejected(self, pseries_3_12):
        """Test boundaries are only tested on cycles."""
        cx = assemble_complex(3, 1, 6, pseries_3_12)
        c2 = ChainBasisElement(cx.table.one(), (2,))
        with pytest.raises(PreconditionError):
            is_zero_in_homology(cx, cx.vector_of(c2), 2)


class TestOperators:
    """Test v_j multiplication, cap with t and the toral class."""

    @pytest.fixture
    def single(self, pseries_3_12):
        """C^BP at p=3 through degree 8 with its homology."""
        cx = assemble_complex(3, 1, 8, pseries_3_12)
        return cx, homology_table(cx)

    def test_multiply_chain(self, single):
        """Test v1 * c1 is the basis element v1 c1."""
        cx, _ = single
        c1 = ChainBasisElement(cx.table.one(), (1,))
        product = multiply_chain(cx, 1, cx.vector_of(c1), 1)
        assert product == cx.vector_of(ChainBasisElement(cx.table.generator(1), (1,)))
        assert multiply_chain(cx, 0, cx.vector_of(c1), 1) == {cx.index_of(c1): 3}
        with pytest.raises(DegreeBoundError):
            multiply_chain(cx, 1, cx.vector_of(c1), 5)

    def test_p_kills_homology_of_one_factor(self, single):
        """Test multiplication by p is zero on H_1."""
        cx, table = single
        maps = induced_multiplication(cx, 0, table, degrees=[1])
        assert maps[1].is_zero

    def test_v1_on_toral_class(self, single):
        """Test v1 * [c1] is nonzero in H_5."""
        cx, table = single
        toral = toral_class(cx, table)
        assert not toral.is_zero
        assert not multiply_class(cx, 1, table, toral).is_zero
        assert multiply_class(cx, 0, table, toral).is_zero

    def test_cap_with_t(self, single):
        """Test cap with t lowers c_d to c_{d-2} and commutes with d."""
        cx, _ = single
        cap = cap_with_t(cx, 1)
        one = cx.table.one()
        assert cap.image_of(ChainBasisElement(one, (3,))) == ChainBasisElement(one, (1,))
        assert cap.image_of(ChainBasisElement(one, (2,))) is None
        assert cap.verify_chain_map()

    def test_cap_factor_range(self, single):
        """Test the factor index must be 1..n."""
        cx, _ = single
        with pytest.raises(PreconditionError):
            cap_with_t(cx, 2)

    def test_cap_commutes_with_v1_on_homology(self, pseries_3_12):
        """Test [cap(v1 z)] = v1 [cap(z)] for both factors of n=2."""
        cx = assemble_complex(3, 2, 10, pseries_3_12)
        table = homology_table(cx)
        for factor in (1, 2):
            cap = cap_with_t(cx, factor)
            for d in range(3, 6):
                for cycle in table.data[d].representatives:
                    left = table.class_of(d + 2, cap.apply(multiply_chain(cx, 1, cycle, d), d + 4))
                    right = multiply_class(cx, 1, table, table.class_of(d - 2, cap.apply(cycle, d)))
                    assert left.coordinates == right.coordinates


class TestBasisIndependence:
    """Test homology does not depend on how the chain bases are ordered."""

    def test_permuted_bases(self, pseries_3_12):
        """Test shuffling every basis gives the same groups."""
        cx = assemble_complex(3, 2, 10, pseries_3_12)
        table = homology_table(cx)
        rng = np.random.default_rng(5)
        orders = {d: [int(i) for i in rng.permutation(cx.dimension(d))] for d in range(0, 11)}
        for d in range(1, 10):
            outgoing = cx.boundary(d).permuted(orders[d - 1], orders[d])
            incoming = cx.boundary(d + 1).permuted(orders[d], orders[d + 1])
            assert subquotient_structure(outgoing, incoming).structure == table.group(d)

    def test_regenerated_p_series(self, pseries_3_12):
        """Test a freshly computed p-series gives the same homology table."""
        fresh = compute_p_series.__wrapped__(3, 12)
        assert fresh is not pseries_3_12
        first = homology_table(assemble_complex(3, 2, 10, pseries_3_12))
        second = homology_table(assemble_complex(3, 2, 10, fresh))
        assert first.to_dict() == second.to_dict()
