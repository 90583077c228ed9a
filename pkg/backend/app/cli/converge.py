import logging
import sys

import click

from app.cli import config_parameters, handle_errors, output_options, run_config
from app.errors import DomainError
from app.export import emit, render
from app.monitoring.convergence import convergence_table, error_decreasing
from app.schemas import ConvergenceRow

logger = logging.getLogger(__name__)

COLUMNS = list(ConvergenceRow.model_fields)


@click.command("converge")
@click.option("--alpha", required=True, help="alpha as p/q or a decimal")
@click.option("--omega", required=True, help="omega = s/(r+s)")
@click.option("--s-list", "s_list", required=True, help="Comma-separated values of s")
@click.option("--precision", type=int, help="Bits for the floating route")
@click.option("--route", type=click.Choice(["auto", "exact", "float"]), default="auto", show_default=True)
@click.option("--threads", type=int, help="Worker processes (default: all cores)")
@click.option("--assert", "assert_trend", is_flag=True, help="Fail unless abs_error strictly decreases in s")
@output_options
@handle_errors
def converge(alpha, omega, s_list, precision, route, threads, assert_trend, fmt, out):
    """Finite-size -log T / s^2 against the limiting sigma(omega)."""
    config = run_config(
        "converge", alpha=alpha, omega=omega, s_list=s_list, precision=precision, route=route,
        threads=threads, assert_trend=assert_trend, fmt=fmt, out=out,
    )
    if not config.s_list:
        raise DomainError("--s-list is empty")
    rows = convergence_table(
        config.alpha, config.omega, config.s_list, config.precision, config.route, config.threads
    )
    for row in rows:
        if row.flag:
            click.echo(f"warning: row s={row.s} flagged {row.flag}", err=True)
    emit(render(config.fmt, "converge", config_parameters(config), COLUMNS, rows), config.out)
    if config.assert_trend and not error_decreasing(rows):
        click.echo("error: abs_error does not decrease strictly with s", err=True)
        sys.exit(1)
