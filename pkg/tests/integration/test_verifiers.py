"""Integration tests: both pipelines end to end at p=3 on small windows."""

import pytest

from src.chains.complex import assemble_complex
from src.chains.homology import homology_table
from src.cohomology.checks import stretch_check, vandermonde_surjectivity
from src.coefficients.pseries import check_p_series_properties, compute_p_series
from src.core.verdict import Verdict
from src.utils.error_handler import ConjecturalPrimeError, PreconditionError
from src.verification.kunneth import (
    dual_pipeline,
    verify_level,
    verify_theorem_main,
    verify_tor,
)
from src.verification.probes import annihilator_probe, squeeze_evidence, verify_kernel_lemma
from src.verification.structure_table import MODE_CONJECTURE_PROBE


class TestMainSplitting:
    """Chain-level homology against the sum over words."""

    def test_single_factor(self, pseries_3_12):
        """Test n=1 agrees in every degree of the window."""
        report = verify_theorem_main(3, 1, 10, pseries_3_12)
        assert report.verdict == Verdict.PASS
        assert [c.degree for c in report.cells] == list(range(1, 10))

    def test_two_factors(self, pseries_3_12):
        """Test n=2 agrees, including the bigraded H_2 = Z/3."""
        pipeline = dual_pipeline(3, 2, 10, pseries_3_12)
        report = verify_theorem_main(3, 2, 10, pipeline=pipeline)
        assert report.verdict == Verdict.PASS
        assert pipeline.homology.group(2).exponents == (1,)
        assert all(check.verdict == Verdict.PASS for check in report.checks)

    def test_inclusive_l_range_is_caught(self, pseries_3_12):
        """Test the widened L range breaks agreement, first in degree 7."""
        report = verify_theorem_main(3, 2, 10, pseries_3_12, inclusive_l_range=True)
        assert report.verdict == Verdict.FAIL
        assert min(c.degree for c in report.failing_cells()) == 7
        kunneth = next(c for c in report.checks if c.name == "Kunneth order equation")
        assert kunneth.verdict == Verdict.FAIL

    def test_levels(self, pseries_3_12):
        """Test each odd_count stratum matches the words with that many N letters."""
        report = verify_level(3, 2, 10, pseries_3_12)
        assert report.verdict == Verdict.PASS
        assert {c.bucket for c in report.cells} == {0, 1, 2}

    def test_p2_requires_probe(self):
        """Test p=2 is refused without the probe flag and labelled with it."""
        with pytest.raises(ConjecturalPrimeError):
            verify_theorem_main(2, 1, 6)
        report = verify_theorem_main(2, 1, 6, conjecture_probe=True)
        assert report.mode == MODE_CONJECTURE_PROBE
        assert report.to_dict()["mode"] == "conjecture probe"


class TestTor:
    """Kernel of id (x) f_1 against N^k (x) L_k."""

    def test_tor_k1(self, pseries_3_12):
        """Test every Tor degree matches and the orders agree."""
        report = verify_tor(3, 1, 12, pseries_3_12)
        assert report.verdict == Verdict.PASS
        assert report.checks[0].name == "equal cardinalities"


class TestProbes:
    """Kernel lemma, squeeze and annihilator probes."""

    def test_kernel_lemma(self, pseries_3_12):
        """Test ker(u) = R * N in every degree, vacuously where no v_j fits."""
        report = verify_kernel_lemma(3, 1, 12, pseries_3_12)
        assert report.verdict != Verdict.FAIL
        assert any(c.verdict == Verdict.VACUOUS for c in report.cells)
        assert any(c.verdict == Verdict.PASS for c in report.cells)

    def test_kernel_lemma_needs_positive_k(self, pseries_3_12):
        """Test k=0 is rejected."""
        with pytest.raises(PreconditionError):
            verify_kernel_lemma(3, 0, 12, pseries_3_12)

    def test_squeeze(self, pseries_3_12):
        """Test v1 acts injectively on N and nothing fails."""
        report = squeeze_evidence(3, 2, 1, 12, pseries_3_12)
        assert report.verdict != Verdict.FAIL
        injective = [c for c in report.cells if c.bucket == "injective"]
        assert injective
        assert all(c.verdict == Verdict.PASS for c in injective)

    def test_squeeze_needs_l_below_k(self, pseries_3_12):
        """Test l >= k is a precondition failure."""
        with pytest.raises(PreconditionError):
            squeeze_evidence(3, 1, 1, 12, pseries_3_12)

    def test_annihilator(self):
        """Test p kills the toral class and v1 does not."""
        report = annihilator_probe(3, 1, 8)
        assert report.verdict == Verdict.PASS
        names = [c.name for c in report.checks]
        assert "p * toral = 0" in names
        assert "v1 * toral != 0" in names


class TestSingularModel:
    """a_i = 0 for i > 0: ordinary homology tensored with BP_*."""

    @staticmethod
    def _counts(n, max_degree):
        pseries = compute_p_series(3, max_degree, "singular")
        table = homology_table(assemble_complex(3, n, max_degree, pseries))
        return {d: table.group(d) for d in range(1, max_degree)}

    def test_single_factor(self):
        """Test one Z/3 per odd chain degree and BP monomial."""
        groups = self._counts(1, 8)
        assert [len(groups[d].exponents) for d in range(1, 8)] == [1, 0, 1, 0, 2, 0, 2]
        assert all(e == 1 for g in groups.values() for e in g.exponents)

    def test_two_factors(self):
        """Test floor((d - j)/2) copies of Z/3 per monomial degree j."""
        groups = self._counts(2, 9)
        assert [len(groups[d].exponents) for d in range(2, 9)] == [1, 1, 2, 2, 4, 4, 6]
        assert all(e == 1 for g in groups.values() for e in g.exponents)


@pytest.mark.slow
class TestAcceptance:
    """Acceptance-size runs."""

    def test_vandermonde_k2(self):
        """Test full rank for k=2 at p=3 with the determinant check."""
        report = vandermonde_surjectivity(3, 2)
        assert report.verdict == Verdict.PASS
        assert report.checks

    def test_main_two_factors_degree_20(self):
        """Test n=2 through degree 20, where v2 enters."""
        report = verify_theorem_main(3, 2, 20, compute_p_series(3, 20))
        assert report.verdict == Verdict.PASS

    def test_annihilator_two_factors(self):
        """Test p and v1 kill the n=2 toral class and v2 does not."""
        report = annihilator_probe(3, 2, 20)
        assert report.verdict == Verdict.PASS

    def test_tor_k2_degree_20(self):
        """Test the Tor comparison for k=2 through degree 20."""
        report = verify_tor(3, 2, 20, compute_p_series(3, 20))
        assert report.verdict == Verdict.PASS

    @pytest.mark.parametrize("k", [1, 2])
    def test_kernel_lemma_degree_20(self, k):
        """Test ker(u) = R * N holds or is vacuous in every degree through 20."""
        report = verify_kernel_lemma(3, k, 20, compute_p_series(3, 20))
        assert report.verdict != Verdict.FAIL
        assert any(c.verdict == Verdict.PASS for c in report.cells)

    @pytest.mark.parametrize("p, n, max_degree", [(3, 3, 18), (5, 2, 20)])
    def test_main_and_levels(self, p, n, max_degree):
        """Test the splitting and its odd_count strata at larger n and p=5."""
        pipeline = dual_pipeline(p, n, max_degree, compute_p_series(p, max_degree))
        assert verify_theorem_main(p, n, max_degree, pipeline=pipeline).verdict == Verdict.PASS
        assert verify_level(p, n, max_degree, pipeline=pipeline).verdict == Verdict.PASS

    def test_p_series_through_degree_40(self):
        """Test a_8 = v2 mod (3, v1) and the other properties through degree 40."""
        checks = check_p_series_properties(compute_p_series(3, 40))
        assert all(check.verdict == Verdict.PASS for check in checks)
        assert "a_8 = v2 mod (p..v1)" in [check.name for check in checks]

    @pytest.mark.parametrize("p", [3, 5])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_stretch_sweep(self, p, k):
        """Test products of k + 1 degree-one classes vanish and k of them need not."""
        assert stretch_check(p, k, k + 1, trials=10, seed=k).verdict == Verdict.PASS
        assert stretch_check(p, k, k, trials=10, seed=k).verdict == Verdict.FAIL
