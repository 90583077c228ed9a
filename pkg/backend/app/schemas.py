import math
import re
from fractions import Fraction
from typing import List, Literal, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    computed_field,
    field_validator,
    model_validator,
)

Scenario = Literal["I", "II"]
Command = Literal["exact", "oracle", "asym", "scan", "converge", "selftest"]

EXACT_COMMANDS = frozenset({"exact", "oracle"})
MAX_EXACT_DECIMAL_DIGITS = 15

_DECIMAL = re.compile(r"^[+-]?(\d*)\.?(\d*)(?:[eE][+-]?\d+)?$")


def significant_digits(text: str) -> int:
    match = _DECIMAL.match(text.strip())
    if not match:
        raise ValueError(f"Not a decimal number: {text!r}")
    digits = (match.group(1) + match.group(2)).lstrip("0")
    return len(digits)


def parse_rational(value, exact: bool = True) -> Fraction:
    """Parse "p/q", an integer or a decimal string into an exact Fraction.

    Decimals are converted digit for digit. When ``exact`` is set, decimals
    with more than 15 significant digits are rejected, since they almost
    always come from a binary float that was printed in full.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if exact:
            raise ValueError("Exact commands need a string or fraction, not a float")
        return Fraction(repr(value))
    text = str(value).strip()
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            result = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Bad fraction {text!r}: {e}") from e
        return result
    if exact and significant_digits(text) > MAX_EXACT_DECIMAL_DIGITS:
        raise ValueError(
            f"{text!r} has more than {MAX_EXACT_DECIMAL_DIGITS} significant digits; "
            "pass it as p/q"
        )
    try:
        return Fraction(text)
    except ValueError as e:
        raise ValueError(f"Bad number {text!r}") from e


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# Lattice geometry
class EmptinessSpec(_Frozen):
    """Frozen staircase region of the N x N lattice, given by r_1 <= ... <= r_s."""

    N: int = Field(ge=1)
    r: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_rows(self):
        if len(self.r) > self.N:
            raise ValueError(f"s = {len(self.r)} exceeds N = {self.N}")
        previous = 1
        for value in self.r:
            if not previous <= value <= self.N:
                raise ValueError(f"r must be weakly increasing within [1, N], got {self.r}")
            previous = value
        return self

    @property
    def s(self) -> int:
        return len(self.r)

    @property
    def partition(self) -> Tuple[int, ...]:
        return tuple(self.N - value for value in self.r)


class PentagonSpec(_Frozen):
    """Aztec diamond of order r+s with a triangle of size s cut from a corner."""

    r: int = Field(ge=1)
    s: int = Field(ge=0)

    @property
    def N(self) -> int:
        return self.r + self.s

    @property
    def omega(self) -> Fraction:
        return Fraction(self.s, self.r + self.s)

    @property
    def theta(self) -> Optional[Fraction]:
        if self.s == 0:
            return None
        return Fraction(2 * self.r + self.s, self.s)

    def emptiness_spec(self) -> EmptinessSpec:
        N = self.N
        return EmptinessSpec(N=N, r=tuple(N - self.s + j - 1 for j in range(1, self.s + 1)))


class HeightConfig(_Frozen):
    r: int = Field(ge=1)
    m: Tuple[int, ...] = ()

    @field_validator("m")
    @classmethod
    def _weakly_increasing(cls, m: Tuple[int, ...], info: ValidationInfo):
        r = info.data.get("r")
        previous = 0
        for value in m:
            if value < previous or (r is not None and value >= r):
                raise ValueError(f"m must be weakly increasing within [0, r), got {m}")
            previous = value
        return m

    @property
    def h(self) -> Tuple[int, ...]:
        return tuple(2 * m + j for j, m in enumerate(self.m, start=1))


# Scaling limit
class ScalingPoint(_Frozen):
    """Asymptotic coordinates; exactly one of omega, theta may be omitted."""

    alpha: float = Field(gt=0, lt=1)
    omega: Optional[float] = Field(default=None, gt=0, lt=1)
    theta: Optional[float] = Field(default=None, gt=1)

    @model_validator(mode="before")
    @classmethod
    def _derive(cls, data):
        data = dict(data)
        omega, theta = data.get("omega"), data.get("theta")
        if omega is None and theta is None:
            raise ValueError("Either omega or theta is required")
        if omega is None:
            data["omega"] = 2.0 / (float(theta) + 1.0)
        elif theta is None:
            data["theta"] = 2.0 / float(omega) - 1.0
        elif not math.isclose(float(theta), 2.0 / float(omega) - 1.0, rel_tol=1e-12):
            raise ValueError("theta must equal 2/omega - 1")
        return data

    @computed_field
    @property
    def omega_c(self) -> float:
        return 1.0 - math.sqrt(self.alpha)

    @computed_field
    @property
    def theta_c(self) -> float:
        q = math.sqrt(self.alpha)
        return (1.0 + q) / (1.0 - q)

    @computed_field
    @property
    def scenario(self) -> Scenario:
        return "I" if self.theta >= self.theta_c else "II"


class BandData(_Frozen):
    scenario: Scenario
    a: float
    b: float
    theta: float
    support: Tuple[float, float]
    first_moment: float

    @model_validator(mode="after")
    def _ordered(self):
        slack = 1e-12 * max(1.0, self.theta)
        if not (0 < self.a < self.b <= self.theta + slack):
            raise ValueError(f"Band endpoints out of order: a={self.a}, b={self.b}, theta={self.theta}")
        return self


# Reports
class ConvergenceRow(_Frozen):
    s: int
    r: int
    neg_log_T_over_s2: float
    sigma_limit: float
    abs_error: float
    route: Literal["exact", "float"]
    precision_bits: int
    flag: str = ""


class CheckResult(_Frozen):
    suite: str
    check: str
    passed: bool
    detail: str = ""


class RunConfig(_Frozen):
    """Validated parameters of one CLI invocation."""

    command: Command
    quantity: Optional[str] = None
    N: Optional[int] = Field(default=None, ge=1)
    r: Optional[int] = Field(default=None, ge=1)
    s: Optional[int] = Field(default=None, ge=0)
    r_list: Tuple[int, ...] = ()
    alpha: Optional[Fraction] = None
    rho: Optional[Fraction] = None
    omega: Optional[Fraction] = None
    theta: Optional[Fraction] = None
    s_list: Tuple[int, ...] = ()
    precision: Optional[int] = Field(default=None, ge=64)
    out: Optional[str] = None
    fmt: Literal["csv", "json"] = "csv"
    threads: Optional[int] = Field(default=None, ge=1)
    kind: Optional[str] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    points: int = Field(default=50, ge=1)
    route: Literal["auto", "exact", "float"] = "auto"
    assert_trend: bool = False
    quick: bool = False
    seed: int = 0

    @field_validator("alpha", "rho", "omega", "theta", mode="before")
    @classmethod
    def _rational(cls, value, info: ValidationInfo):
        if value is None:
            return None
        return parse_rational(value, exact=info.data.get("command") in EXACT_COMMANDS)

    @field_validator("r_list", "s_list", mode="before")
    @classmethod
    def _int_list(cls, value):
        if value is None or value == "":
            return ()
        if isinstance(value, str):
            return tuple(int(part) for part in value.split(",") if part.strip())
        return tuple(value)

    @property
    def float_alpha(self) -> Optional[float]:
        return None if self.alpha is None else float(self.alpha)


class ExportMeta(_Frozen):
    command: str
    parameters: dict
    columns: List[str]
