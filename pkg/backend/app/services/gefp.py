"""Exact finite-size formulas for emptiness probabilities and the pentagonal
partition function at the free-fermion point."""
import logging
import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb, factorial, prod
from typing import Iterator, List, Optional, Union

import numpy as np
from mpmath import mp, mpf
from scipy.special import gammaln

from app.config import get_settings
from app.errors import (
    DomainError,
    IrrationalValueError,
    LossOfSignificanceError,
    OracleMismatchError,
    TermCapError,
)
from app.models.alpha_poly import AlphaPoly
from app.models.numbers import Number, exact_sqrt, to_bigfloat
from app.schemas import EmptinessSpec, HeightConfig, PentagonSpec
from app.services.exact_core import binomial_big, det_exact, det_float, p_poly

logger = logging.getLogger(__name__)


def check_alpha(alpha: Number, allow_one: bool = False) -> Fraction:
    alpha = Fraction(alpha)
    upper_ok = alpha <= 1 if allow_one else alpha < 1
    if not (0 < alpha and upper_ok):
        interval = "(0, 1]" if allow_one else "(0, 1)"
        raise DomainError(f"alpha must lie in {interval}, got {alpha}")
    return alpha


def _corner_size(s: int) -> int:
    return s * (s + 1) // 2


def _check_terms(count: int, what: str) -> None:
    cap = get_settings().term_cap
    if count > cap:
        raise TermCapError(
            f"{what} has {count} terms, above the cap {cap} (PENTATILE_TERM_CAP)"
        )


# Determinant forms
def gefp_det(spec: EmptinessSpec, alpha: Number) -> Fraction:
    """G_{N,s}^{(r_1..r_s)} from the s x s determinant of P polynomials."""
    alpha = check_alpha(alpha)
    N, s, r = spec.N, spec.s, spec.r
    if s == 0:
        return Fraction(1)
    matrix = [
        [p_poly(N - s + j + k - 2, N - r[s - j], j)(alpha) for k in range(1, s + 1)]
        for j in range(1, s + 1)
    ]
    prefactor = (1 - alpha) ** sum(N - rj for rj in r)
    return prefactor * det_exact(matrix)


def efp_det(N: int, r: int, s: int, alpha: Number) -> Fraction:
    """Emptiness formation probability of the (N - r) x s corner rectangle."""
    return gefp_det(EmptinessSpec(N=N, r=(r,) * s), alpha)


def tdefp_matrix(spec: PentagonSpec) -> List[List[AlphaPoly]]:
    r, s = spec.r, spec.s
    return [[p_poly(r + j + k - 2, j, j) for k in range(1, s + 1)] for j in range(1, s + 1)]


def _tdefp_reduced_det(spec: PentagonSpec, alpha: Fraction) -> Fraction:
    # det[P] alone, i.e. T / (1 - alpha)^{s(s+1)/2}; a polynomial in alpha
    return det_exact([[p(alpha) for p in row] for row in tdefp_matrix(spec)])


def tdefp_det(spec: PentagonSpec, alpha: Number) -> Fraction:
    """T_{r,s} from the determinant representation."""
    alpha = check_alpha(alpha)
    if spec.s == 0:
        return Fraction(1)
    return (1 - alpha) ** _corner_size(spec.s) * _tdefp_reduced_det(spec, alpha)


def tdefp_float(spec: PentagonSpec, alpha, precision: Optional[int] = None) -> mpf:
    """T_{r,s} by floating LU at ``precision`` bits."""
    precision = precision or get_settings().precision
    with mp.workprec(precision):
        x = to_bigfloat(alpha, precision)
        if not 0 < x < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
        if spec.s == 0:
            return mpf(1)
        matrix = [[p.evaluate_float(x, precision) for p in row] for row in tdefp_matrix(spec)]
        prefactor = (1 - x) ** _corner_size(spec.s)
        try:
            det = det_float(matrix, precision)
        except LossOfSignificanceError as e:
            raise LossOfSignificanceError(
                str(e), value=prefactor * e.value, estimate=e.estimate
            ) from e
        return prefactor * det


# Height sums
def _m_tuples(r: int, s: int) -> Iterator[tuple]:
    return combinations_with_replacement(range(r), s)


def height_config_count(spec: PentagonSpec) -> int:
    return comb(spec.r - 1 + spec.s, spec.s)


def height_configs(spec: PentagonSpec) -> Iterator[HeightConfig]:
    """Every 0 <= m_1 <= ... <= m_s < r, in lexicographic order."""
    for m in _m_tuples(spec.r, spec.s):
        yield HeightConfig(r=spec.r, m=m)


def tdefp_sum_poly(spec: PentagonSpec) -> AlphaPoly:
    """The height sum as a polynomial in alpha, without the (1-alpha) prefactor."""
    r, s = spec.r, spec.s
    if s == 0:
        return AlphaPoly.constant(1)
    _check_terms(height_config_count(spec), f"Height sum at r={r}, s={s}")
    pairs = [(j, k) for k in range(s) for j in range(k)]
    coeffs = [0] * (s * (r - 1) + 1)
    for m in _m_tuples(r, s):
        coeffs[sum(m)] += prod(2 * (m[k] - m[j]) + k - j for j, k in pairs)
    denominator = prod(k - j for j, k in pairs)
    return AlphaPoly.from_coeffs(Fraction(c, denominator) for c in coeffs)


def tdefp_sum(spec: PentagonSpec, alpha: Number) -> Fraction:
    """T_{r,s} from the sum over height configurations."""
    alpha = check_alpha(alpha)
    if spec.s == 0:
        return Fraction(1)
    return (1 - alpha) ** _corner_size(spec.s) * tdefp_sum_poly(spec)(alpha)


# Reduced sum and its alpha -> 1 limit
def _sqrt_power(alpha: Fraction, k: int) -> Fraction:
    """alpha^{k/2}, exactly, or IrrationalValueError."""
    if k % 2 == 0:
        return alpha ** (k // 2)
    root = exact_sqrt(alpha)
    if root is None:
        raise IrrationalValueError(
            f"alpha^({k}/2) is irrational at alpha={alpha}; use a perfect-square alpha"
        )
    return root**k


def g_rs(spec: PentagonSpec, alpha: Number) -> Fraction:
    """g_{r,s} = T_{r,s} * (sqrt(alpha)/(1-alpha))^{s(s+1)/2}.

    alpha = 1 is accepted and gives C_{r,s}.
    """
    alpha = check_alpha(alpha, allow_one=True)
    if spec.s == 0:
        return Fraction(1)
    k = _corner_size(spec.s)
    return _sqrt_power(alpha, k) * _tdefp_reduced_det(spec, alpha)


def c_rs_product(r: int, s: int) -> int:
    value = Fraction(comb(r + s - 1, s))
    for j in range(1, s + 1):
        value *= Fraction(factorial(j), factorial(2 * j - 1))
    for k in range(1, s + 1):
        for j in range(1, k):
            value *= 2 * r + j + k - 2
    if value.denominator != 1:
        raise AssertionError(f"C_{{{r},{s}}} product formula is not an integer")
    return value.numerator


def c_rs_binomial_det(r: int, s: int) -> int:
    matrix = [
        [binomial_big(r + j + k - 2, r - j + k - 1) for k in range(1, s + 1)]
        for j in range(1, s + 1)
    ]
    return int(det_exact(matrix))


def c_rs_residue_det(r: int, s: int) -> int:
    """det[res_{x=1} x^{r+j+k-2} / (x-1)^{2j}] = det[C(r+j+k-2, 2j-1)]."""
    matrix = [
        [binomial_big(r + j + k - 2, 2 * j - 1) for k in range(1, s + 1)]
        for j in range(1, s + 1)
    ]
    return int(det_exact(matrix))


def c_rs_reversed_det(r: int, s: int) -> int:
    matrix = [
        [binomial_big(r + s + k - j - 1, r - s + k + j - 2) for k in range(1, s + 1)]
        for j in range(1, s + 1)
    ]
    sign = -1 if (s * (s - 1) // 2) % 2 else 1
    return sign * int(det_exact(matrix))


def c_rs(r: int, s: int) -> int:
    """C_{r,s} = lim_{alpha -> 1} g_{r,s}, checked against the binomial determinant."""
    if r < 1 or s < 0:
        raise DomainError(f"C_{{r,s}} needs r >= 1 and s >= 0, got ({r}, {s})")
    value = c_rs_product(r, s)
    check = c_rs_binomial_det(r, s)
    if value != check:
        raise OracleMismatchError(
            f"C_{{{r},{s}}}: product formula {value} != binomial determinant {check}"
        )
    return value


def log_c_rs(r: int, s: int) -> float:
    """log C_{r,s} from log-gamma sums; usable far beyond exact-integer sizes."""
    if r < 1 or s < 0:
        raise DomainError(f"C_{{r,s}} needs r >= 1 and s >= 0, got ({r}, {s})")
    if s == 0:
        return 0.0
    j = np.arange(1, s + 1, dtype=float)
    total = gammaln(r + s) - gammaln(s + 1) - gammaln(r)
    total += float(np.sum(gammaln(j + 1) - gammaln(2 * j)))
    jj, kk = np.triu_indices(s, k=1)
    total += float(np.sum(np.log(2.0 * r + jj + kk)))
    return float(total)


def psi_finite_size(theta: float, s: int) -> float:
    """-log C_{r,s} / s^2 at r = ceil((theta - 1) s / 2)."""
    if theta <= 1:
        raise DomainError(f"theta must exceed 1, got {theta}")
    if s < 1:
        raise DomainError(f"s must be positive, got {s}")
    exact_theta = Fraction(theta).limit_denominator(10**12)
    r = max(1, math.ceil((exact_theta - 1) * s / 2))
    return -log_c_rs(r, s) / s**2


# Partition functions
def z_ff(N: int, rho: Number, alpha: Number) -> Fraction:
    """Free-fermion DWBC partition function rho^{N(N+1)/2}."""
    rho, alpha = Fraction(rho), Fraction(alpha)
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    if rho <= 0:
        raise DomainError(f"rho must be positive, got {rho}")
    if not 0 <= alpha <= 1:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    return rho ** (N * (N + 1) // 2)


def z_pentagon(
    spec: PentagonSpec, rho: Number, alpha: Number, precision: Optional[int] = None
) -> Union[Fraction, mpf]:
    """Partition function of the pentagonal domain.

    Equal to rho^{N(N+1)/2} (rho (1-alpha))^{-s(s+1)/4} T_{r,s}. The result
    is exact when that power is rational; otherwise a ``precision`` in bits
    is required and an mpf is returned.
    """
    rho = Fraction(rho)
    if rho <= 0:
        raise DomainError(f"rho must be positive, got {rho}")
    alpha = check_alpha(alpha)
    N = spec.N
    k = _corner_size(spec.s)
    numerator = rho ** (N * (N + 1) // 2) * tdefp_det(spec, alpha)
    base = rho * (1 - alpha)
    try:
        return numerator / _sqrt_power(base, k)
    except IrrationalValueError:
        if precision is None:
            raise IrrationalValueError(
                f"(rho(1-alpha))^({k}/2) is irrational for rho={rho}, alpha={alpha}; "
                "pass a precision"
            )
    logger.info(f"z_pentagon at r={spec.r}, s={spec.s} falls back to {precision}-bit floats")
    with mp.workprec(precision):
        return to_bigfloat(numerator, precision) / mp.sqrt(to_bigfloat(base, precision)) ** k


# Parity-free log-gas
def symmetrized_loggas(spec: PentagonSpec, alpha: Number) -> Fraction:
    """Sum of prod alpha^{h_j/2} prod |h_k - h_j| over all s-tuples in [1, 2r+s-2].

    Tuples with a repeated entry vanish, so this is s! times the sum over
    strictly increasing tuples. Requires a perfect-square alpha.
    """
    alpha = check_alpha(alpha)
    q = exact_sqrt(alpha)
    if q is None:
        raise IrrationalValueError(f"sqrt(alpha) is irrational at alpha={alpha}")
    r, s = spec.r, spec.s
    if s == 0:
        return Fraction(1)
    top = 2 * r + s - 2
    _check_terms(comb(top, s), f"Symmetrized log-gas sum at r={r}, s={s}")
    by_power = {}
    for h in combinations(range(1, top + 1), s):
        weight = prod(h[k] - h[j] for k in range(s) for j in range(k))
        by_power[sum(h)] = by_power.get(sum(h), 0) + weight
    total = sum((weight * q**power for power, weight in by_power.items()), Fraction(0))
    return factorial(s) * total


def kappa_estimate(spec: PentagonSpec, alpha: Number, precision: Optional[int] = None) -> mpf:
    """Empirical kappa_s = g_{r,s} / symmetrized log-gas sum."""
    precision = precision or get_settings().precision
    ratio = g_rs(spec, alpha) / symmetrized_loggas(spec, alpha)
    return to_bigfloat(ratio, precision)
