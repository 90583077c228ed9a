import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from app.errors import ConfigurationError

load_dotenv()


class Settings(BaseModel):
    """Runtime knobs, read from the environment (and an optional .env file)."""

    nmax: int = Field(default=7, ge=1)
    term_cap: int = Field(default=10_000_000, ge=1)
    precision: int = Field(default=256, ge=64)
    exact_max_s: int = Field(default=40, ge=0)
    log_level: str = "WARNING"


_ENV_FIELDS = {
    "nmax": "PENTATILE_NMAX",
    "term_cap": "PENTATILE_TERM_CAP",
    "precision": "PENTATILE_PRECISION",
    "exact_max_s": "PENTATILE_EXACT_MAX_S",
    "log_level": "PENTATILE_LOG_LEVEL",
}


def get_settings() -> Settings:
    # Not cached: tests override variables with monkeypatch.setenv
    values = {
        field: os.getenv(variable)
        for field, variable in _ENV_FIELDS.items()
        if os.getenv(variable) not in (None, "")
    }
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid environment settings: {e}") from e
