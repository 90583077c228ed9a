"""Scaling limit of the triangular emptiness probability.

Conventions: q = sqrt(alpha), omega = s/(r+s), theta = 2/omega - 1. The
log-gas density lives on [0, theta]; scenario I (theta >= theta_c) has a
saturated stretch [0, a], a band (a, b) and a void [b, theta]; scenario II
(theta < theta_c) saturates both [0, a] and [b, theta].
"""
import cmath
import logging
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import ValidationError
from scipy import integrate
from scipy.special import xlogy

from app.errors import BranchCutError, DomainError, OutOfBandError
from app.schemas import BandData, Scenario, ScalingPoint

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-10
RELATIVE_STEP = 0.015


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not theta > 1.0:
        raise DomainError(f"theta must exceed 1, got {theta}")
    return theta


def _check_omega(omega: float) -> float:
    omega = float(omega)
    if not 0.0 < omega < 1.0:
        raise DomainError(f"omega must lie in (0, 1), got {omega}")
    return omega


def _log_ratio(x: float, y: float) -> float:
    """log(x/y) for positive x, y; accurate when x is close to y."""
    d = (x - y) / y
    if abs(d) < 0.5:
        return math.log1p(d)
    return math.log(x / y)


# Critical values
def omega_c(alpha: float) -> float:
    return 1.0 - math.sqrt(_check_alpha(alpha))


def theta_c(alpha: float) -> float:
    q = math.sqrt(_check_alpha(alpha))
    return (1.0 + q) / (1.0 - q)


def theta_of_omega(omega: float) -> float:
    return 2.0 / _check_omega(omega) - 1.0


def omega_of_theta(theta: float) -> float:
    return 2.0 / (_check_theta(theta) + 1.0)


def scaling_point(alpha: float, omega: float = None, theta: float = None) -> ScalingPoint:
    try:
        return ScalingPoint(alpha=alpha, omega=omega, theta=theta)
    except ValidationError as e:
        raise DomainError(f"Invalid scaling point: {e}") from e


def scenario(theta: float, alpha: float) -> Scenario:
    """Band structure at (theta, alpha); the junction belongs to scenario I."""
    return "I" if _check_theta(theta) >= theta_c(alpha) else "II"


# Free energies
def psi(theta: float) -> float:
    """alpha -> 1 limit of the log-gas free energy; continuous down to theta = 1."""
    theta = float(theta)
    if theta < 1.0:
        raise DomainError(f"psi needs theta >= 1, got {theta}")
    bracket = (
        xlogy((theta + 1.0) ** 2, theta + 1.0)
        - 2.0 * xlogy(theta**2, theta)
        + xlogy((theta - 1.0) ** 2, theta - 1.0)
    )
    return float(-0.25 * bracket + math.log(2.0))


def phi_one(alpha: float) -> float:
    """Free energy when the right wall is out of reach (theta-independent)."""
    alpha = _check_alpha(alpha)
    return -0.5 * math.log(math.sqrt(alpha) / (1.0 - alpha))


def phi_two(theta: float, alpha: float) -> float:
    """Free energy with both ends saturated, written through theta_c.

    Evaluates the closed form for any theta > 1 so the two branches can be
    compared on either side of the junction.
    """
    theta = _check_theta(theta)
    tc = theta_c(alpha)
    return (
        0.5 * theta**2 * _log_ratio(theta, tc)
        - 0.25 * (theta - 1.0) ** 2 * _log_ratio(theta - 1.0, tc - 1.0)
        - 0.25 * (theta + 1.0) ** 2 * _log_ratio(theta + 1.0, tc + 1.0)
        + 0.5 * math.log(4.0 * tc / (tc * tc - 1.0))
    )


def phi_two_psi_form(theta: float, alpha: float) -> float:
    theta = _check_theta(theta)
    alpha = _check_alpha(alpha)
    q = math.sqrt(alpha)
    return (
        0.5 * (theta**2 - 1.0) * math.log(2.0 * alpha**0.25 / (1.0 + q))
        - 0.25 * theta * math.log(alpha)
        + psi(theta)
    )


def phi(theta: float, alpha: float) -> float:
    if scenario(theta, alpha) == "I":
        return phi_one(alpha)
    return phi_two(theta, alpha)


def _sigma_two(omega: float, oc: float) -> float:
    # Analytic continuation of the omega > omega_c branch
    d = omega - oc
    return (
        0.5 * math.log1p(d / oc)
        - ((1.0 - omega) / omega) ** 2 * math.log1p(-d / (1.0 - oc))
        + 0.5 * ((2.0 - omega) / omega) ** 2 * math.log1p(-d / (2.0 - oc))
    )


def sigma(omega: float, alpha: float) -> float:
    """-lim log T / s^2 along r = ceil((1/omega - 1) s)."""
    omega = _check_omega(omega)
    oc = omega_c(alpha)
    if omega <= oc:
        return 0.0
    return _sigma_two(omega, oc)


def free_energy_density(omega: float, rho: float, alpha: float) -> float:
    omega = _check_omega(omega)
    alpha = _check_alpha(alpha)
    rho = float(rho)
    if rho <= 0:
        raise DomainError(f"rho must be positive, got {rho}")
    w2 = omega * omega
    return (
        -0.5 * math.log(rho)
        + w2 / (4.0 - 2.0 * w2) * math.log(1.0 - alpha)
        + 2.0 * w2 / (2.0 - w2) * sigma(omega, alpha)
    )


def third_derivative_jump(alpha: float) -> float:
    """Jump of sigma''' across omega_c (right minus left)."""
    oc = omega_c(alpha)
    return 2.0 / ((oc - 2.0) * (oc - 1.0) * oc**3)


def _third_derivative(f, x: float, h: float) -> float:
    return (
        -f(x + 3 * h) + 8 * f(x + 2 * h) - 13 * f(x + h)
        + 13 * f(x - h) - 8 * f(x - 2 * h) + f(x - 3 * h)
    ) / (8 * h**3)


def third_derivative_jump_numeric(alpha: float, step: Optional[float] = None) -> float:
    """Fourth-order finite differences of each sigma branch at omega_c.

    The default step is 1.5% of the distance from omega_c to the nearer end of (0, 1).
    """
    oc = omega_c(alpha)
    if step is None:
        step = RELATIVE_STEP * min(oc, 1.0 - oc)
    if not 3 * step < min(oc, 1.0 - oc):
        raise DomainError(f"step {step} too large for omega_c = {oc}")
    right = _third_derivative(lambda w: _sigma_two(w, oc), oc, step)
    left = _third_derivative(lambda w: 0.0, oc, step)
    return right - left


def phi_third_derivative_jump(alpha: float) -> float:
    """Jump of d^3 Phi / d theta^3 at theta_c (scenario II minus scenario I)."""
    tc = theta_c(alpha)
    return -1.0 / (tc * (tc * tc - 1.0))


def phi_third_derivative_jump_numeric(alpha: float, step: Optional[float] = None) -> float:
    """Centered differences of Phi_II at theta_c; Phi_I is constant in theta."""
    tc = theta_c(alpha)
    if step is None:
        step = RELATIVE_STEP * (tc - 1.0)
    if not 3 * step < tc - 1.0:
        raise DomainError(f"step {step} too large for theta_c = {tc}")
    return _third_derivative(lambda t: phi_two(t, alpha), tc, step)


def jump_from_theta(alpha: float, step: Optional[float] = None) -> float:
    """The sigma''' jump recovered from the Phi''' jump through d theta / d omega = -2/omega^2.

    Phi_II - Phi_I vanishes to second order at theta_c, so only the cubed
    first derivative of the coordinate change survives.
    """
    oc = omega_c(alpha)
    return phi_third_derivative_jump_numeric(alpha, step) * (-2.0 / oc**2) ** 3


# Band structure
def scenario_one_endpoints(alpha: float) -> Tuple[float, float]:
    q = math.sqrt(_check_alpha(alpha))
    return (1.0 - q) / (1.0 + q), (1.0 + q) / (1.0 - q)


def scenario_two_endpoints(theta: float, alpha: float) -> Tuple[float, float]:
    theta = _check_theta(theta)
    q = math.sqrt(_check_alpha(alpha))
    u = math.sqrt(theta + 1.0)
    v = math.sqrt((theta - 1.0) * q)
    scale = 2.0 * (1.0 + q)
    return (u - v) ** 2 / scale, (u + v) ** 2 / scale


def endpoint_residuals(theta: float, alpha: float) -> Tuple[float, float]:
    """Residuals of the two endpoint equations of the two-wall band."""
    a, b = scenario_two_endpoints(theta, alpha)
    q = math.sqrt(alpha)
    first = ((math.sqrt(theta - a) + math.sqrt(max(theta - b, 0.0))) / (math.sqrt(b) + math.sqrt(a))) ** 2 - q
    second = math.sqrt(a * b) + math.sqrt((theta - a) * max(theta - b, 0.0)) - 1.0
    return first, second


def first_moment(theta: float, alpha: float) -> float:
    theta = _check_theta(theta)
    alpha = _check_alpha(alpha)
    if scenario(theta, alpha) == "I":
        return (1.0 + alpha) / (2.0 * (1.0 - alpha))
    a, b = scenario_two_endpoints(theta, alpha)
    return (a + b) / 4.0 + 0.5 * theta * math.sqrt((theta - a) * max(theta - b, 0.0))


def endpoints(theta: float, alpha: float) -> BandData:
    theta = _check_theta(theta)
    kind = scenario(theta, alpha)
    if kind == "I":
        a, b = scenario_one_endpoints(alpha)
    else:
        a, b = scenario_two_endpoints(theta, alpha)
    return BandData(
        scenario=kind,
        a=a,
        b=b,
        theta=theta,
        support=(0.0, b if kind == "I" else theta),
        first_moment=first_moment(theta, alpha),
    )


# Resolvent
def _resolvent_one(z, a, b, q):
    sqrt = np.sqrt if isinstance(z, np.ndarray) else cmath.sqrt
    log = np.log if isinstance(z, np.ndarray) else cmath.log
    num = math.sqrt(a) * sqrt(z - b) + math.sqrt(b) * sqrt(z - a)
    den = math.sqrt(b - a) * sqrt(z)
    return -math.log(q) - 2.0 * log(num / den)


def _resolvent_two(z, a, b, q, theta):
    sqrt = np.sqrt if isinstance(z, np.ndarray) else cmath.sqrt
    log = np.log if isinstance(z, np.ndarray) else cmath.log
    num = math.sqrt(a) * sqrt(z - b) + math.sqrt(b) * sqrt(z - a)
    den = math.sqrt(theta - a) * sqrt(z - b) + math.sqrt(max(theta - b, 0.0)) * sqrt(z - a)
    return -math.log(q) - log((z - theta) / z) - 2.0 * log(num / den)


def _resolvent(z, band: BandData, alpha: float):
    q = math.sqrt(alpha)
    if band.scenario == "I":
        return _resolvent_one(z, band.a, band.b, q)
    return _resolvent_two(z, band.a, band.b, q, band.theta)


def resolvent(z: complex, theta: float, alpha: float) -> complex:
    """W(z) off the support; real z on the support raises BranchCutError."""
    z = complex(z)
    band = endpoints(theta, _check_alpha(alpha))
    lo, hi = band.support
    if z.imag == 0.0 and lo <= z.real <= hi:
        raise BranchCutError(f"z = {z.real} lies on the cut [{lo}, {hi}]")
    return complex(_resolvent(z, band, alpha))


def resolvent_moments(
    theta: float, alpha: float, radius: float = 1e3, points: int = 4096
) -> Tuple[float, float]:
    """(total mass, first moment) from contour integrals of W on |z| = radius."""
    band = endpoints(theta, _check_alpha(alpha))
    if radius <= band.support[1]:
        raise DomainError(f"radius {radius} must enclose the support up to {band.support[1]}")
    angles = (np.arange(points) + 0.5) * (2.0 * np.pi / points)
    z = radius * np.exp(1j * angles)
    w = _resolvent(z, band, alpha)
    mass = np.mean(w * z)
    moment = np.mean(w * z * z)
    return float(mass.real), float(moment.real)


def spe_residual(x: float, theta: float, alpha: float, epsilon: float = 1e-8) -> float:
    """|Re[W(x+i0) + W(x-i0)] + log alpha| on the band, extrapolated in epsilon."""
    alpha = _check_alpha(alpha)
    band = endpoints(theta, alpha)
    if not band.a < x < band.b:
        raise OutOfBandError(f"x = {x} is outside the band ({band.a}, {band.b})")

    def both_sides(eps):
        return (_resolvent(complex(x, eps), band, alpha) + _resolvent(complex(x, -eps), band, alpha)).real

    value = 2.0 * both_sides(epsilon / 2) - both_sides(epsilon)
    return abs(value + math.log(alpha))


def band_density(mu: float, theta: float, alpha: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Density on the open band from the jump of W, Richardson-extrapolated to epsilon -> 0."""
    alpha = _check_alpha(alpha)
    band = endpoints(theta, alpha)
    if not band.a < mu < band.b:
        raise OutOfBandError(f"mu = {mu} is outside the band ({band.a}, {band.b})")
    eps = min(epsilon, 1e-3 * min(mu - band.a, band.b - mu))

    def jump(e):
        return -_resolvent(complex(mu, e), band, alpha).imag / math.pi

    value = 2.0 * jump(eps / 2) - jump(eps)
    return value


def _band_quad(f, band: BandData) -> float:
    value, error = integrate.quad(f, band.a, band.b, epsabs=1e-11, epsrel=1e-11, limit=200)
    logger.debug(f"Band quadrature {value} (error estimate {error})")
    return value


def band_mass(theta: float, alpha: float) -> float:
    """Total mass of the density: saturated stretches plus the band integral."""
    band = endpoints(theta, alpha)
    inner = _band_quad(lambda mu: band_density(mu, theta, alpha), band)
    saturated = band.a + (band.theta - band.b if band.scenario == "II" else 0.0)
    return saturated + inner


def band_moment(theta: float, alpha: float) -> float:
    """First moment of the density, saturated stretches included."""
    band = endpoints(theta, alpha)
    inner = _band_quad(lambda mu: mu * band_density(mu, theta, alpha), band)
    saturated = band.a**2 / 2.0
    if band.scenario == "II":
        saturated += (band.theta**2 - band.b**2) / 2.0
    return saturated + inner
