import functools
import logging
import sys

import click
from pydantic import ValidationError

from app.errors import PentatileError
from app.schemas import RunConfig

logger = logging.getLogger(__name__)

USAGE_ERROR_EXIT = 2


def handle_errors(command):
    """Turn library exceptions into a stderr message and the matching exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except PentatileError as e:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"error: {e}", err=True)
            sys.exit(e.exit_code)
        except ValidationError as e:
            click.echo(f"error: invalid parameters: {e}", err=True)
            sys.exit(USAGE_ERROR_EXIT)

    return wrapper


def output_options(command):
    command = click.option(
        "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True,
        help="Output format",
    )(command)
    command = click.option("--out", type=click.Path(dir_okay=False), default=None,
                           help="Output file (default stdout)")(command)
    return command


def run_config(command: str, **values) -> RunConfig:
    """Validated RunConfig; unset options are left at their defaults."""
    return RunConfig(command=command, **{k: v for k, v in values.items() if v is not None})


def config_parameters(config: RunConfig) -> dict:
    """Parameters worth echoing in JSON metadata (set fields other than the command)."""
    return {
        name: value
        for name, value in config.model_dump(exclude_defaults=True).items()
        if name not in ("command", "out", "fmt", "threads")
    }
