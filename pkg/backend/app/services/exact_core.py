import logging
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, factorial, lcm
from typing import List, Sequence

import sympy
from mpmath import mp, mpf

from app.errors import DomainError, LossOfSignificanceError
from app.models.alpha_poly import AlphaPoly
from app.models.numbers import to_bigfloat

logger = logging.getLogger(__name__)

# Relative error above which a floating determinant is refused
SIGNIFICANCE_THRESHOLD = mpf(2) ** -32


def binomial_big(n: int, k: int) -> int:
    """C(n, k) for n >= 0, zero outside 0 <= k <= n."""
    if n < 0:
        raise DomainError(f"binomial_big needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def _multichoose(m: int, i: int) -> int:
    # Coefficient of x^-i in (1 - c/x)^-m with c = 1
    if i == 0:
        return 1
    if m == 0:
        return 0
    return comb(m + i - 1, i)


@lru_cache(maxsize=None)
def p_poly(l: int, m: int, n: int) -> AlphaPoly:
    """P_l^{(m,n)}(alpha): sum of the residues of x^l / ((x-alpha)^m (x-1)^n)
    at x = alpha and x = 1.

    Computed as minus the residue at infinity, which gives the coefficients
    directly as products of multichoose numbers.
    """
    if min(l, m, n) < 0:
        raise DomainError(f"p_poly needs non-negative indices, got ({l}, {m}, {n})")
    d = l - m - n + 1
    if d < 0:
        return AlphaPoly()
    coeffs = [_multichoose(m, i) * _multichoose(n, d - i) for i in range(d + 1)]
    return AlphaPoly.from_coeffs(coeffs)


def p_poly_residues(l: int, m: int, n: int) -> AlphaPoly:
    """Same polynomial as ``p_poly``, built by differentiating at each pole."""
    x, a = sympy.symbols("x alpha")
    total = sympy.Integer(0)
    if m > 0:
        regular = x**l / (x - 1) ** n
        total += sympy.diff(regular, x, m - 1).subs(x, a) / factorial(m - 1)
    if n > 0:
        regular = x**l / (x - a) ** m
        total += sympy.diff(regular, x, n - 1).subs(x, 1) / factorial(n - 1)
    total = sympy.cancel(sympy.together(total))
    if total == 0:
        return AlphaPoly()
    poly = sympy.Poly(total, a)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return AlphaPoly.from_coeffs(coeffs)


def _check_square(matrix: Sequence[Sequence]) -> int:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise DomainError("Determinant of a non-square matrix")
    return n


def det_exact(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first cleared of denominators so the elimination runs on
    integers; the row scale factors are divided out at the end.
    """
    n = _check_square(matrix)
    if n == 0:
        return Fraction(1)
    rows: List[List[int]] = []
    scale = 1
    for row in matrix:
        row = [Fraction(x) for x in row]
        factor = reduce(lcm, (x.denominator for x in row), 1)
        rows.append([int(x * factor) for x in row])
        scale *= factor

    sign = 1
    previous = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * pivot - rows[i][k] * rows[k][j]) // previous
            rows[i][k] = 0
        previous = pivot
    return Fraction(sign * rows[n - 1][n - 1], scale)


def _lu_in_place(a, n):
    """Partial-pivot LU on a list of mpf rows; returns (perm, sign) or None if singular."""
    perm = list(range(n))
    sign = 1
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[p][k] == 0:
            return None
        if p != k:
            a[k], a[p] = a[p], a[k]
            perm[k], perm[p] = perm[p], perm[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / pivot
            a[i][k] = f
            if f:
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return perm, sign


def _lu_solve(lu, perm, b, n):
    y = [b[perm[i]] for i in range(n)]
    for i in range(n):
        row = lu[i]
        y[i] -= sum((row[j] * y[j] for j in range(i)), mpf(0))
    for i in reversed(range(n)):
        row = lu[i]
        y[i] = (y[i] - sum((row[j] * y[j] for j in range(i + 1, n)), mpf(0))) / row[i]
    return y


def _norm1(matrix, n):
    return max(sum((abs(matrix[i][j]) for i in range(n)), mpf(0)) for j in range(n))


def condition_estimate(lu, perm, original, n) -> mpf:
    """1-norm condition number from the explicit inverse of the LU factors."""
    inverse_norm = mpf(0)
    for j in range(n):
        e = [mpf(0)] * n
        e[j] = mpf(1)
        # Solving with permuted rows: P A = L U, so A^-1 e_j = U^-1 L^-1 P e_j
        column = _lu_solve(lu, perm, e, n)
        inverse_norm = max(inverse_norm, sum((abs(x) for x in column), mpf(0)))
    return _norm1(original, n) * inverse_norm


def det_float(matrix: Sequence[Sequence], precision: int) -> mpf:
    """Determinant at ``precision`` bits by pivoted LU elimination.

    Rows and columns are equilibrated by powers of two (which is exact)
    before factoring. Raises LossOfSignificanceError when n * cond_1 * 2^-p
    exceeds 2^-32; the computed value rides along on the exception.

    Well-conditioned input comes back within 2^-(precision-8) relative error.
    Element growth on general integer matrices can cost up to 32 more bits.
    """
    if precision < 64:
        raise DomainError(f"precision must be at least 64 bits, got {precision}")
    n = _check_square(matrix)
    with mp.workprec(precision):
        if n == 0:
            return mpf(1)
        a = [[to_bigfloat(x, precision) for x in row] for row in matrix]

        shift = 0
        for i in range(n):
            peak = max(abs(x) for x in a[i])
            if peak == 0:
                return mpf(0)
            e = mp.frexp(peak)[1]
            a[i] = [mp.ldexp(x, -e) for x in a[i]]
            shift += e
        for j in range(n):
            peak = max(abs(a[i][j]) for i in range(n))
            if peak == 0:
                return mpf(0)
            e = mp.frexp(peak)[1]
            for i in range(n):
                a[i][j] = mp.ldexp(a[i][j], -e)
            shift += e

        original = [row[:] for row in a]
        factored = _lu_in_place(a, n)
        if factored is None:
            return mpf(0)
        perm, sign = factored
        value = mpf(sign)
        for k in range(n):
            value *= a[k][k]
        value = mp.ldexp(value, shift)

        cond = condition_estimate(a, perm, original, n)
        estimate = n * cond * mp.ldexp(mpf(1), -precision)
        logger.debug(f"det_float n={n} precision={precision} cond~{mp.nstr(cond, 5)}")
        if estimate > SIGNIFICANCE_THRESHOLD:
            logger.warning(
                f"Determinant of size {n} at {precision} bits has relative error "
                f"estimate {mp.nstr(estimate, 5)}"
            )
            raise LossOfSignificanceError(
                f"Relative error estimate {mp.nstr(estimate, 5)} exceeds 2^-32 "
                f"at {precision} bits; increase the precision",
                value=value,
                estimate=estimate,
            )
        return value


def det_cofactor(matrix: Sequence[Sequence]) -> Fraction:
    """Naive Laplace expansion along the first row; for cross-checking only."""
    n = _check_square(matrix)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in matrix[1:])]
        term = Fraction(matrix[0][j]) * det_cofactor(minor)
        total += term if j % 2 == 0 else -term
    return total
