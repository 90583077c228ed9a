#!/usr/bin/env python
import logging
import sys

import click

from app.cli.asym import asym_command
from app.cli.converge import converge
from app.cli.exact import exact
from app.cli.oracle import oracle
from app.cli.scan import scan
from app.cli.selftest import selftest
from app.config import get_settings
from app.errors import ConfigurationError


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG")
def cli(verbose):
    """Pentatile: emptiness probabilities and pentagonal tilings at the free-fermion point"""
    try:
        level = get_settings().log_level.upper()
    except ConfigurationError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(e.exit_code)
    if verbose == 1:
        level = "INFO"
    elif verbose > 1:
        level = "DEBUG"
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


cli.add_command(exact)
cli.add_command(oracle)
cli.add_command(asym_command, name="asym")
cli.add_command(scan)
cli.add_command(converge)
cli.add_command(selftest)

if __name__ == "__main__":
    cli()
