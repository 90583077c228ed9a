import random
from fractions import Fraction

import pytest
from click.testing import CliRunner

from app.models.weights import VertexWeights
from manage import cli


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep developer .env overrides out of the tests."""
    for variable in (
        "PENTATILE_NMAX",
        "PENTATILE_TERM_CAP",
        "PENTATILE_PRECISION",
        "PENTATILE_EXACT_MAX_S",
        "PENTATILE_LOG_LEVEL",
    ):
        monkeypatch.delenv(variable, raising=False)


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator for property tests."""
    return random.Random(20240601)


@pytest.fixture(params=[Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)], ids=["a=1/4", "a=1/2", "a=3/4"])
def alpha(request) -> Fraction:
    return request.param


@pytest.fixture
def weights(alpha) -> VertexWeights:
    return VertexWeights.free_fermion(1, alpha)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner(mix_stderr=False)


@pytest.fixture
def invoke(runner):
    """Run the CLI with a list of arguments."""

    def run(*args):
        return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)

    return run
