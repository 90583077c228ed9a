import click

from app.cli import config_parameters, handle_errors, output_options, run_config
from app.export import emit, render
from app.tasks.scan_tasks import SCAN_COLUMNS, run_scan


@click.command("scan")
@click.option("--kind", type=click.Choice(sorted(SCAN_COLUMNS)), default="sigma", show_default=True)
@click.option("--alpha", required=True, help="alpha in (0, 1)")
@click.option("--start", type=float, help="First grid value")
@click.option("--stop", type=float, help="Last grid value")
@click.option("--points", type=int, default=50, show_default=True)
@click.option("--rho", default="1", show_default=True, help="rho for free-energy scans")
@click.option("--theta", help="theta for density scans")
@click.option("--threads", type=int, help="Worker processes (default: all cores)")
@output_options
@handle_errors
def scan(kind, alpha, start, stop, points, rho, theta, threads, fmt, out):
    """Tabulate an asymptotic quantity along a grid."""
    config = run_config(
        "scan", kind=kind, alpha=alpha, start=start, stop=stop, points=points, rho=rho,
        theta=theta, threads=threads, fmt=fmt, out=out,
    )
    columns, rows = run_scan(
        config.kind,
        float(config.alpha),
        start=config.start,
        stop=config.stop,
        points=config.points,
        rho=float(config.rho),
        theta=None if config.theta is None else float(config.theta),
        threads=config.threads,
    )
    emit(render(config.fmt, "scan", config_parameters(config), columns, rows), config.out)
