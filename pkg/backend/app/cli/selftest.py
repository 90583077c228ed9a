import sys

import click

from app.cli import handle_errors, run_config
from app.export import emit
from app.tasks.selftest import run_selftest


def format_report(results) -> str:
    lines = []
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{status} {result.suite}: {result.check} ({result.detail})")
    passed = sum(1 for result in results if result.passed)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


@click.command("selftest")
@click.option("--quick", is_flag=True, help="Smaller sizes (oracle up to N=4)")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for random matrices")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report file (default stdout)")
@handle_errors
def selftest(quick, seed, out):
    """Run every invariant suite; exit 0 only if all pass."""
    config = run_config("selftest", quick=quick, seed=seed, out=out)
    results, timings = run_selftest(quick=config.quick, seed=config.seed)
    emit(format_report(results), config.out)
    for suite, seconds in timings.items():
        click.echo(f"{suite}: {seconds:.2f}s", err=True)
    if not all(result.passed for result in results):
        sys.exit(1)
