"""Unit tests for p-local scalars, finite p-groups and verdicts."""

from fractions import Fraction

import pytest

from src.core.finite_group import FinitePGroup
from src.core.scalars import is_unit, residue, to_scalar, valuation
from src.core.verdict import CheckResult, Verdict
from src.utils.error_handler import IntegralityError


class TestScalars:
    """Test valuation and residue helpers."""

    def test_valuation_of_integers_and_fractions(self):
        """Test p-adic valuations, including negative ones."""
        assert valuation(9, 3) == 2
        assert valuation(Fraction(9, 2), 3) == 2
        assert valuation(Fraction(1, 3), 3) == -1
        assert valuation(-12, 3) == 1

    def test_valuation_of_zero_is_none(self):
        """Test zero has no valuation."""
        assert valuation(0, 5) is None

    def test_to_scalar_rejects_p_in_denominator(self):
        """Test coercion refuses non-p-local rationals."""
        assert to_scalar(Fraction(1, 2), 3) == Fraction(1, 2)
        with pytest.raises(IntegralityError):
            to_scalar(Fraction(1, 3), 3)

    def test_residue_inverts_denominator(self):
        """Test residues of p-local fractions modulo p^e."""
        assert residue(Fraction(1, 2), 3) == 2
        assert residue(-8, 3) == 1
        assert residue(Fraction(5, 2), 3, exponent=2) == (5 * 5) % 9

    def test_units(self):
        """Test unit detection."""
        assert is_unit(Fraction(2, 5), 3)
        assert not is_unit(6, 3)
        assert not is_unit(0, 3)


class TestFinitePGroup:
    """Test exponent-multiset groups."""

    def test_exponents_are_sorted_and_zeros_dropped(self):
        """Test normalisation in the constructor."""
        group = FinitePGroup(3, (2, 0, 1))
        assert group.exponents == (1, 2)
        assert group == FinitePGroup(3, (1, 2))

    def test_describe(self):
        """Test human-readable rendering."""
        assert FinitePGroup(3, (1, 2)).describe() == "Z/3 + Z/9"
        assert FinitePGroup.zero(3).describe() == "0"

    def test_orders(self):
        """Test order and log_order of finite and infinite groups."""
        group = FinitePGroup(3, (1, 2))
        assert group.log_order == 3
        assert group.order == 27
        assert FinitePGroup(3, (), free_rank=1).order is None

    def test_direct_sum_and_repeat(self):
        """Test direct sums and repeated copies."""
        z3 = FinitePGroup.cyclic(3, 1)
        assert (z3 + FinitePGroup.cyclic(3, 2)).exponents == (1, 2)
        assert z3.repeated(3).exponents == (1, 1, 1)
        assert z3.repeated(0).is_zero

    def test_mixed_primes_rejected(self):
        """Test adding groups over different primes fails."""
        with pytest.raises(ValueError):
            FinitePGroup.cyclic(3, 1) + FinitePGroup.cyclic(5, 1)


class TestVerdict:
    """Test verdict combination."""

    def test_fail_dominates(self):
        """Test FAIL beats everything else."""
        verdicts = [Verdict.PASS, Verdict.INCONCLUSIVE, Verdict.FAIL, Verdict.VACUOUS]
        assert Verdict.combine(verdicts) == Verdict.FAIL

    def test_inconclusive_beats_pass(self):
        """Test INCONCLUSIVE beats PASS."""
        assert Verdict.combine([Verdict.PASS, Verdict.INCONCLUSIVE]) == Verdict.INCONCLUSIVE

    def test_only_vacuous_is_vacuous(self):
        """Test an all-vacuous or empty list stays VACUOUS."""
        assert Verdict.combine([Verdict.VACUOUS]) == Verdict.VACUOUS
        assert Verdict.combine([]) == Verdict.VACUOUS
        assert Verdict.combine([Verdict.VACUOUS, Verdict.PASS]) == Verdict.PASS

    def test_check_result_serialises(self):
        """Test CheckResult.to_dict uses plain strings."""
        result = CheckResult("a_0 = p", Verdict.PASS, "ok")
        assert result.to_dict() == {"name": "a_0 = p", "verdict": "PASS", "detail": "ok"}
