from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

from mpmath import mp, mpf

from app.models.numbers import Number, to_bigfloat

# Degree of the zero polynomial; compares below every integer and equals none
ZERO_POLY_DEGREE = float("-inf")


@dataclass(frozen=True)
class AlphaPoly:
    """Dense polynomial in alpha with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of alpha**i. Trailing zeros are trimmed
    on construction, so equal polynomials compare equal.
    """

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Number]) -> "AlphaPoly":
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, value: Number) -> "AlphaPoly":
        return cls((value,))

    @property
    def degree(self):
        if not self.coeffs:
            return ZERO_POLY_DEGREE
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, alpha: Number) -> Fraction:
        """Exact Horner evaluation at a rational alpha."""
        alpha = Fraction(alpha)
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * alpha + c
        return result

    def evaluate_float(self, alpha, precision: int) -> mpf:
        x = to_bigfloat(alpha, precision)
        with mp.workprec(precision):
            result = mpf(0)
            for c in reversed(self.coeffs):
                result = result * x + to_bigfloat(c, precision)
            return result

    def __add__(self, other: "AlphaPoly") -> "AlphaPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return AlphaPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "AlphaPoly":
        return AlphaPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "AlphaPoly") -> "AlphaPoly":
        return self + (-other)

    def __mul__(self, other) -> "AlphaPoly":
        if not isinstance(other, AlphaPoly):
            return AlphaPoly(tuple(c * Fraction(other) for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return AlphaPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return AlphaPoly(tuple(out))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.coeffs:
            return "AlphaPoly(0)"
        terms = [f"{c}*a^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return f"AlphaPoly({' + '.join(terms)})"
