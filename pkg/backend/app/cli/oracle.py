import logging
import sys
from fractions import Fraction

import click

from app.cli import config_parameters, handle_errors, output_options, run_config
from app.errors import DomainError
from app.export import emit, render
from app.models.weights import VertexWeights
from app.services import gefp, six_vertex

logger = logging.getLogger(__name__)

GEFP_COLUMNS = ["N", "r", "alpha", "status", "formula", "bruteforce"]
COUNT_COLUMNS = ["N", "configurations", "asm_count", "status"]
Z_COLUMNS = ["N", "rho", "alpha", "status", "formula", "bruteforce"]


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def gefp_rows(N: int, alpha: Fraction, rho: Fraction):
    w = VertexWeights.free_fermion(rho, alpha)
    rows = []
    for spec in six_vertex.emptiness_specs(N):
        if spec.s == 0:
            continue
        formula = gefp.gefp_det(spec, alpha)
        brute = six_vertex.gefp_bruteforce(spec, w)
        ok = formula == brute
        rows.append({
            "N": N,
            "r": ";".join(map(str, spec.r)),
            "alpha": alpha,
            "status": _status(ok),
            "formula": None if ok else formula,
            "bruteforce": None if ok else brute,
        })
    return rows


def count_rows(N: int):
    configurations = sum(1 for _ in six_vertex.enumerate_dwbc(N))
    expected = six_vertex.asm_count(N)
    return [{
        "N": N,
        "configurations": configurations,
        "asm_count": expected,
        "status": _status(configurations == expected),
    }]


def z_rows(N: int, alpha: Fraction, rho: Fraction):
    formula = gefp.z_ff(N, rho, alpha)
    brute = six_vertex.z_bruteforce(N, VertexWeights.free_fermion(rho, alpha))
    ok = formula == brute
    return [{
        "N": N,
        "rho": rho,
        "alpha": alpha,
        "status": _status(ok),
        "formula": None if ok else formula,
        "bruteforce": None if ok else brute,
    }]


@click.command("oracle")
@click.option("--all-gefp", "quantity", flag_value="all-gefp",
              help="Compare the GEFP determinant with enumeration for every spec")
@click.option("--count", "quantity", flag_value="count", help="Count DWBC configurations")
@click.option("--z", "quantity", flag_value="z", help="Compare Z_N with enumeration")
@click.option("-N", "n", type=int, required=True, help="Lattice size")
@click.option("--alpha", help="alpha as p/q or a decimal")
@click.option("--rho", default="1", show_default=True, help="rho as p/q or a decimal")
@output_options
@handle_errors
def oracle(quantity, n, alpha, rho, fmt, out):
    """Cross-check exact formulas against brute-force enumeration."""
    config = run_config("oracle", quantity=quantity, N=n, alpha=alpha, rho=rho, fmt=fmt, out=out)
    if config.quantity == "count":
        columns, rows = COUNT_COLUMNS, count_rows(config.N)
    elif config.quantity in ("all-gefp", "z"):
        if config.alpha is None:
            raise DomainError(f"--{config.quantity} needs --alpha")
        if config.quantity == "all-gefp":
            columns, rows = GEFP_COLUMNS, gefp_rows(config.N, config.alpha, config.rho)
        else:
            columns, rows = Z_COLUMNS, z_rows(config.N, config.alpha, config.rho)
    else:
        raise DomainError("Choose a check: --all-gefp, --count or --z")

    emit(render(config.fmt, "oracle", config_parameters(config), columns, rows), config.out)
    failures = [row for row in rows if row["status"] == "FAIL"]
    if failures:
        click.echo(f"{len(failures)} of {len(rows)} checks FAILED", err=True)
        sys.exit(1)
    logger.info(f"All {len(rows)} checks passed")
