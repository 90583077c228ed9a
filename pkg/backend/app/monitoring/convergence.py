import logging
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence

from mpmath import mp

from app.config import get_settings
from app.errors import DomainError, LossOfSignificanceError
from app.schemas import ConvergenceRow, PentagonSpec, parse_rational
from app.services.asymptotics import sigma
from app.services.gefp import tdefp_det, tdefp_float

logger = logging.getLogger(__name__)

ROUTES = ("auto", "exact", "float")


def _exact(value) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value, exact=False)
    return Fraction(value).limit_denominator(10**12) if isinstance(value, float) else Fraction(value)


def r_for(omega: Fraction, s: int) -> int:
    """r = ceil((1/omega - 1) s), at least 1."""
    return max(1, math.ceil((1 / omega - 1) * s))


def _neg_log_fraction(value: Fraction) -> float:
    # log of the numerator and denominator separately: both may exceed float range
    return -(math.log(value.numerator) - math.log(value.denominator))


class ConvergenceMonitor:
    """Finite-size estimates of sigma(omega) against the closed form."""

    def __init__(
        self,
        alpha,
        omega,
        precision: Optional[int] = None,
        route: str = "auto",
        threads: Optional[int] = None,
    ):
        if route not in ROUTES:
            raise DomainError(f"route must be one of {ROUTES}, got {route!r}")
        settings = get_settings()
        self.alpha = _exact(alpha)
        self.omega = _exact(omega)
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.omega < 1:
            raise DomainError(f"omega must lie in (0, 1), got {self.omega}")
        self.precision = precision or settings.precision
        self.route = route
        self.threads = threads
        self.exact_max_s = settings.exact_max_s
        self.sigma_limit = sigma(float(self.omega), float(self.alpha))

    def _route_for(self, s: int) -> str:
        if self.route != "auto":
            return self.route
        return "exact" if s <= self.exact_max_s else "float"

    def row(self, s: int) -> ConvergenceRow:
        if s < 1:
            raise DomainError(f"s must be positive, got {s}")
        r = r_for(self.omega, s)
        spec = PentagonSpec(r=r, s=s)
        route = self._route_for(s)
        flag = ""
        if route == "exact":
            neg_log = _neg_log_fraction(tdefp_det(spec, self.alpha))
            bits = 0
        else:
            bits = self.precision
            try:
                value = tdefp_float(spec, self.alpha, bits)
            except LossOfSignificanceError as e:
                logger.warning(f"Row s={s}, r={r}: {e}")
                value, flag = e.value, "loss-of-significance"
            with mp.workprec(bits):
                if value > 0:
                    neg_log = float(-mp.log(value))
                else:
                    neg_log, flag = math.nan, "non-positive"
        estimate = neg_log / s**2
        logger.info(f"s={s} r={r} route={route}: -log T / s^2 = {estimate:.6g}")
        return ConvergenceRow(
            s=s,
            r=r,
            neg_log_T_over_s2=estimate,
            sigma_limit=self.sigma_limit,
            abs_error=abs(estimate - self.sigma_limit),
            route=route,
            precision_bits=bits,
            flag=flag,
        )

    def table(self, s_list: Sequence[int]) -> List[ConvergenceRow]:
        if self.threads == 1:
            return [self.row(s) for s in s_list]
        with ProcessPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(self.row, s_list))


def convergence_table(
    alpha,
    omega,
    s_list: Sequence[int],
    precision: Optional[int] = None,
    route: str = "auto",
    threads: Optional[int] = None,
) -> List[ConvergenceRow]:
    return ConvergenceMonitor(alpha, omega, precision, route, threads).table(s_list)


def error_decreasing(rows: Sequence[ConvergenceRow]) -> bool:
    """Whether abs_error strictly decreases down the table (in s order)."""
    ordered = sorted(rows, key=lambda row: row.s)
    errors = [row.abs_error for row in ordered]
    return all(later < earlier for earlier, later in zip(errors, errors[1:]))
