# src/core/scalars.py
# Purpose: p-local scalar helpers on top of fractions.Fraction
"""Exact scalars of the local ring Z_(p).

Scalars are plain ``fractions.Fraction`` values whose denominators are
coprime to the ambient prime. Fraction already keeps them reduced with a
positive denominator and zero as 0/1.
"""

from fractions import Fraction
from typing import Optional, Union

from src.utils.error_handler import IntegralityError

ScalarLike = Union[int, Fraction]


def integer_valuation(value: int, p: int) -> Optional[int]:
    """Exponent of p in a nonzero integer; None for zero."""
    if value == 0:
        return None
    value = abs(value)
    count = 0
    while value % p == 0:
        value //= p
        count += 1
    return count


def valuation(value: ScalarLike, p: int) -> Optional[int]:
    """p-adic valuation of a rational (may be negative); None for zero.

    Example:
        valuation(Fraction(9, 2), 3) == 2
        valuation(Fraction(1, 3), 3) == -1
    """
    value = Fraction(value)
    if value == 0:
        return None
    return integer_valuation(value.numerator, p) - integer_valuation(
        value.denominator, p
    )


def is_p_local(value: ScalarLike, p: int) -> bool:
    """True iff the reduced denominator is coprime to p."""
    return Fraction(value).denominator % p != 0


def to_scalar(value: ScalarLike, p: int) -> Fraction:
    """Coerce to a Z_(p) scalar.

    Raises:
        IntegralityError: if the denominator is divisible by p
    """
    value = Fraction(value)
    if value.denominator % p == 0:
        raise IntegralityError(f"{value} is not an element of Z_({p})")
    return value


def is_unit(value: ScalarLike, p: int) -> bool:
    """True for nonzero scalars of valuation zero."""
    return valuation(value, p) == 0


def residue(value: ScalarLike, p: int, exponent: int = 1) -> int:
    """Image of a p-local scalar in Z/p^exponent, as an integer in [0, p^e).

    Raises:
        IntegralityError: if the scalar is not p-local
    """
    value = to_scalar(value, p)
    modulus = p**exponent
    if modulus == 1:
        return 0
    inverse = pow(value.denominator, -1, modulus)
    return (value.numerator * inverse) % modulus


def prime_power(p: int, exponent: int) -> int:
    """p**exponent, kept as a helper for readable call sites."""
    return p**exponent
