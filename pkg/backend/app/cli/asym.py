import click

from app.cli import config_parameters, handle_errors, output_options, run_config
from app.errors import DomainError
from app.export import emit, render
from app.services import asymptotics as asym

REPORT_COLUMNS = [
    "alpha", "omega", "theta", "omega_c", "theta_c", "scenario", "sigma", "free_energy",
    "phi", "psi", "a", "b", "first_moment", "jump",
]


def report(alpha: float, omega: float = None, theta: float = None, rho: float = 1.0) -> dict:
    point = asym.scaling_point(alpha, omega=omega, theta=theta)
    band = asym.endpoints(point.theta, alpha)
    return {
        "alpha": alpha,
        "omega": point.omega,
        "theta": point.theta,
        "omega_c": point.omega_c,
        "theta_c": point.theta_c,
        "scenario": point.scenario,
        "sigma": asym.sigma(point.omega, alpha),
        "free_energy": asym.free_energy_density(point.omega, rho, alpha),
        "phi": asym.phi(point.theta, alpha),
        "psi": asym.psi(point.theta),
        "a": band.a,
        "b": band.b,
        "first_moment": band.first_moment,
        "jump": asym.third_derivative_jump(alpha),
    }


@click.command("asym")
@click.option("--alpha", required=True, help="alpha in (0, 1)")
@click.option("--omega", help="omega = s/(r+s)")
@click.option("--theta", help="theta = 2/omega - 1")
@click.option("--rho", default="1", show_default=True, help="Overall weight normalization")
@output_options
@handle_errors
def asym_command(alpha, omega, theta, rho, fmt, out):
    """Scaling-limit report at one point."""
    config = run_config("asym", alpha=alpha, omega=omega, theta=theta, rho=rho, fmt=fmt, out=out)
    if config.omega is None and config.theta is None:
        raise DomainError("Give --omega or --theta")
    row = report(
        float(config.alpha),
        omega=None if config.omega is None else float(config.omega),
        theta=None if config.theta is None else float(config.theta),
        rho=float(config.rho),
    )
    emit(render(config.fmt, "asym", config_parameters(config), REPORT_COLUMNS, [row]), config.out)
