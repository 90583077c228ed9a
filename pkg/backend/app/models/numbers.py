from fractions import Fraction
from math import isqrt
from typing import Optional, Union

from mpmath import mp, mpf

BigRational = Fraction
Number = Union[int, Fraction]


def exact_sqrt(value: Number) -> Optional[Fraction]:
    """Rational square root of a non-negative rational, or None if irrational."""
    value = Fraction(value)
    if value < 0:
        return None
    p, q = isqrt(value.numerator), isqrt(value.denominator)
    if p * p == value.numerator and q * q == value.denominator:
        return Fraction(p, q)
    return None


def to_bigfloat(value, precision: int) -> mpf:
    """Round an int, Fraction, float, string or mpf to a BigFloat of ``precision`` bits."""
    with mp.workprec(precision):
        if isinstance(value, Fraction):
            return mpf(value.numerator) / value.denominator
        return +mpf(value)
