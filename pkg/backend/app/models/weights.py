from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from app.errors import DomainError, IrrationalWeightError
from app.models.numbers import Number, exact_sqrt


@dataclass(frozen=True)
class VertexWeights:
    """The six Boltzmann weights, stored through their exact squares.

    The free-fermion parametrisation has w1 = w2 = sqrt(rho(1-alpha)) and
    w3 = w4 = sqrt(rho*alpha), which are irrational in general, while every
    product that a DWBC configuration produces is rational. Keeping squares
    lets ``monomial`` stay exact without ever taking an irrational root.
    """

    squares: Tuple[Fraction, ...]
    rho: Optional[Fraction] = None
    alpha: Optional[Fraction] = None

    def __post_init__(self):
        squares = tuple(Fraction(x) for x in self.squares)
        if len(squares) != 6:
            raise DomainError("Six vertex weights are required")
        if any(x < 0 for x in squares):
            raise DomainError("Vertex weights must be non-negative")
        object.__setattr__(self, "squares", squares)

    @classmethod
    def from_values(cls, values: Sequence[Number]) -> "VertexWeights":
        values = [Fraction(v) for v in values]
        if any(v < 0 for v in values):
            raise DomainError("Vertex weights must be non-negative")
        return cls(tuple(v * v for v in values))

    @classmethod
    def free_fermion(cls, rho: Number, alpha: Number) -> "VertexWeights":
        rho, alpha = Fraction(rho), Fraction(alpha)
        if rho <= 0:
            raise DomainError(f"rho must be positive, got {rho}")
        if not 0 <= alpha <= 1:
            raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
        a2 = rho * (1 - alpha)
        b2 = rho * alpha
        weights = cls((a2, a2, b2, b2, Fraction(1), rho * rho), rho=rho, alpha=alpha)
        if not weights.is_free_fermion():
            raise AssertionError("free-fermion parametrisation violated")
        return weights

    def value(self, vertex_type: int) -> Optional[Fraction]:
        """Exact weight of one vertex type when it is rational."""
        return exact_sqrt(self.squares[vertex_type - 1])

    def is_free_fermion(self) -> bool:
        # w1w2 + w3w4 = w5w6 decided on squares: with X, Y, Z the squared
        # products, sqrt X + sqrt Y = sqrt Z  <=>  Z-X-Y >= 0 and (Z-X-Y)^2 = 4XY
        s = self.squares
        x, y, z = s[0] * s[1], s[2] * s[3], s[4] * s[5]
        d = z - x - y
        return d >= 0 and d * d == 4 * x * y

    def monomial(self, counts: Sequence[int]) -> Fraction:
        """prod_i w_i**n_i for a census ``counts = (n1, ..., n6)``."""
        result = Fraction(1)
        leftover = Fraction(1)
        for square, n in zip(self.squares, counts):
            if n < 0:
                raise DomainError("Vertex counts must be non-negative")
            result *= square ** (n // 2)
            if n % 2:
                leftover *= square
        root = exact_sqrt(leftover)
        if root is None:
            raise IrrationalWeightError(
                f"Configuration weight with census {tuple(counts)} is irrational"
            )
        return result * root
