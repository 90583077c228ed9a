import logging

import click

from app.cli import config_parameters, handle_errors, output_options, run_config
from app.errors import DomainError
from app.export import EXACT_COLUMNS, emit, exact_row, render
from app.schemas import EmptinessSpec, PentagonSpec
from app.services import gefp

logger = logging.getLogger(__name__)


def _require(config, *names):
    missing = [name for name in names if getattr(config, name) in (None, ())]
    if missing:
        raise DomainError(f"{config.quantity} needs {', '.join(missing)}")


def compute(config):
    """(quantity label, parameter label, value) for one exact request."""
    q = config.quantity
    if q == "tdefp":
        _require(config, "r", "s", "alpha")
        return "T", f"r={config.r} s={config.s} alpha={config.alpha}", gefp.tdefp_det(
            PentagonSpec(r=config.r, s=config.s), config.alpha)
    if q == "gefp":
        _require(config, "N", "alpha")
        spec = EmptinessSpec(N=config.N, r=config.r_list)
        label = f"N={config.N} r={';'.join(map(str, spec.r))} alpha={config.alpha}"
        return "G", label, gefp.gefp_det(spec, config.alpha)
    if q == "efp":
        _require(config, "N", "r", "s", "alpha")
        return "F", f"N={config.N} r={config.r} s={config.s} alpha={config.alpha}", gefp.efp_det(
            config.N, config.r, config.s, config.alpha)
    if q == "z":
        _require(config, "N", "rho", "alpha")
        return "Z", f"N={config.N} rho={config.rho} alpha={config.alpha}", gefp.z_ff(
            config.N, config.rho, config.alpha)
    if q == "pentagon":
        _require(config, "r", "s", "rho", "alpha")
        value = gefp.z_pentagon(
            PentagonSpec(r=config.r, s=config.s), config.rho, config.alpha, config.precision)
        return "Z_pentagon", f"r={config.r} s={config.s} rho={config.rho} alpha={config.alpha}", value
    if q == "crs":
        _require(config, "r", "s")
        return "C", f"r={config.r} s={config.s}", gefp.c_rs(config.r, config.s)
    if q == "g":
        _require(config, "r", "s", "alpha")
        return "g", f"r={config.r} s={config.s} alpha={config.alpha}", gefp.g_rs(
            PentagonSpec(r=config.r, s=config.s), config.alpha)
    raise DomainError("Choose a quantity: --tdefp, --gefp, --efp, --z, --pentagon, --crs or --g")


@click.command("exact")
@click.option("--tdefp", "quantity", flag_value="tdefp", help="Triangular emptiness probability T_{r,s}")
@click.option("--gefp", "quantity", flag_value="gefp", help="Generalized EFP for -N and --r-list")
@click.option("--efp", "quantity", flag_value="efp", help="Rectangular EFP F_N^{(r,s)}")
@click.option("--z", "quantity", flag_value="z", help="Free-fermion partition function Z_N")
@click.option("--pentagon", "quantity", flag_value="pentagon", help="Pentagonal partition function")
@click.option("--crs", "quantity", flag_value="crs", help="alpha -> 1 constant C_{r,s}")
@click.option("--g", "quantity", flag_value="g", help="Reduced sum g_{r,s}")
@click.option("-N", "n", type=int, help="Lattice size")
@click.option("-r", "r", type=int, help="r")
@click.option("-s", "s", type=int, help="s")
@click.option("--r-list", "r_list", help="Comma-separated r_1,...,r_s")
@click.option("--alpha", help="alpha as p/q or a decimal")
@click.option("--rho", help="rho as p/q or a decimal")
@click.option("--precision", type=int, help="Bits for irrational results")
@output_options
@handle_errors
def exact(quantity, n, r, s, r_list, alpha, rho, precision, fmt, out):
    """Exact finite-size values with fraction and decimal renderings."""
    config = run_config(
        "exact", quantity=quantity, N=n, r=r, s=s, r_list=r_list, alpha=alpha, rho=rho,
        precision=precision, fmt=fmt, out=out,
    )
    quantity_label, parameters, value = compute(config)
    logger.info(f"{quantity_label}({parameters}) = {value}")
    rows = [exact_row(quantity_label, parameters, value)]
    emit(render(config.fmt, "exact", config_parameters(config), EXACT_COLUMNS, rows), config.out)
