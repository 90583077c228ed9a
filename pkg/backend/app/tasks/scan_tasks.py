import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from app.errors import DomainError
from app.services import asymptotics as asym

logger = logging.getLogger(__name__)

Row = Dict[str, object]

SCAN_COLUMNS = {
    "sigma": ["omega", "alpha", "omega_c", "sigma", "scenario"],
    "free-energy": ["omega", "alpha", "rho", "free_energy", "scenario"],
    "phi": ["theta", "alpha", "theta_c", "phi", "psi", "scenario"],
    "endpoints": ["theta", "alpha", "theta_c", "a", "b", "first_moment", "scenario"],
    "density": ["mu", "theta", "alpha", "density"],
}


def _omega_scenario(omega: float, alpha: float) -> str:
    return "I" if omega <= asym.omega_c(alpha) else "II"


def _sigma_row(omega: float, alpha: float, rho: float, band_theta: float) -> Row:
    return {
        "omega": omega,
        "alpha": alpha,
        "omega_c": asym.omega_c(alpha),
        "sigma": asym.sigma(omega, alpha),
        "scenario": _omega_scenario(omega, alpha),
    }


def _free_energy_row(omega: float, alpha: float, rho: float, band_theta: float) -> Row:
    return {
        "omega": omega,
        "alpha": alpha,
        "rho": rho,
        "free_energy": asym.free_energy_density(omega, rho, alpha),
        "scenario": _omega_scenario(omega, alpha),
    }


def _phi_row(theta: float, alpha: float, rho: float, band_theta: float) -> Row:
    return {
        "theta": theta,
        "alpha": alpha,
        "theta_c": asym.theta_c(alpha),
        "phi": asym.phi(theta, alpha),
        "psi": asym.psi(theta),
        "scenario": asym.scenario(theta, alpha),
    }


def _endpoints_row(theta: float, alpha: float, rho: float, band_theta: float) -> Row:
    band = asym.endpoints(theta, alpha)
    return {
        "theta": theta,
        "alpha": alpha,
        "theta_c": asym.theta_c(alpha),
        "a": band.a,
        "b": band.b,
        "first_moment": band.first_moment,
        "scenario": band.scenario,
    }


def _density_row(mu: float, alpha: float, rho: float, band_theta: float) -> Row:
    return {
        "mu": mu,
        "theta": band_theta,
        "alpha": alpha,
        "density": asym.band_density(mu, band_theta, alpha),
    }


_ROW_BUILDERS: Dict[str, Callable[[float, float, float, float], Row]] = {
    "sigma": _sigma_row,
    "free-energy": _free_energy_row,
    "phi": _phi_row,
    "endpoints": _endpoints_row,
    "density": _density_row,
}


def scan_grid(
    kind: str,
    alpha: float,
    start: Optional[float] = None,
    stop: Optional[float] = None,
    points: int = 50,
    theta: Optional[float] = None,
) -> List[float]:
    """Grid of the scanned variable, with per-kind default bounds.

    omega scans default to [0.01, 0.99], theta scans to [1.05, 2 theta_c].
    Density scans place ``points`` midpoints inside the open band at ``theta``.
    """
    if points < 1:
        raise DomainError(f"points must be positive, got {points}")
    if kind == "density":
        if theta is None:
            raise DomainError("A density scan needs theta")
        band = asym.endpoints(theta, alpha)
        lo = band.a if start is None else max(start, band.a)
        hi = band.b if stop is None else min(stop, band.b)
        if not lo < hi:
            raise DomainError(f"Density range [{lo}, {hi}] misses the band ({band.a}, {band.b})")
        return [float(x) for x in lo + (hi - lo) * (np.arange(points) + 0.5) / points]
    if kind in ("sigma", "free-energy"):
        lo = 0.01 if start is None else start
        hi = 0.99 if stop is None else stop
    else:
        lo = 1.05 if start is None else start
        hi = 2.0 * asym.theta_c(alpha) if stop is None else stop
    return [float(x) for x in np.linspace(lo, hi, points)]


def run_scan(
    kind: str,
    alpha: float,
    start: Optional[float] = None,
    stop: Optional[float] = None,
    points: int = 50,
    rho: float = 1.0,
    theta: Optional[float] = None,
    threads: Optional[int] = None,
) -> Tuple[List[str], List[Row]]:
    """Evaluate one asymptotic quantity along a grid; rows come back in grid order."""
    if kind not in _ROW_BUILDERS:
        raise DomainError(f"Unknown scan kind {kind!r}; expected one of {sorted(_ROW_BUILDERS)}")
    alpha = float(alpha)
    grid = scan_grid(kind, alpha, start, stop, points, theta)
    build = _ROW_BUILDERS[kind]
    logger.info(f"Scanning {kind} over {len(grid)} points at alpha={alpha}")
    job = partial(build, alpha=alpha, rho=float(rho), band_theta=theta)
    if threads == 1:
        return SCAN_COLUMNS[kind], [job(x) for x in grid]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(job, grid))
    return SCAN_COLUMNS[kind], rows
