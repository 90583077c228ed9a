"""Deterministic CSV/JSON rendering of result tables.

Exact fractions render as "p/q"; every numeric value also has a fixed
17-significant-digit decimal form so identical inputs give byte-identical
output.
"""
import csv
import io
import json
import math
from decimal import Context, Decimal
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import click
from mpmath import mp, mpf
from pydantic import BaseModel

from app.schemas import ExportMeta

SIGNIFICANT_DIGITS = 17
_DECIMAL_CONTEXT = Context(prec=SIGNIFICANT_DIGITS)


def fraction_string(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal_string(value) -> str:
    """17 significant digits, scientific notation only when the exponent demands it."""
    if isinstance(value, Fraction):
        d = _DECIMAL_CONTEXT.divide(Decimal(value.numerator), Decimal(value.denominator))
        return format(d, f".{SIGNIFICANT_DIGITS}g")
    if isinstance(value, mpf):
        return mp.nstr(value, SIGNIFICANT_DIGITS)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction) and value.denominator != 1:
        return fraction_string(value)
    if isinstance(value, Fraction):
        return str(value.numerator)
    return decimal_string(value)


def _json_value(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return fraction_string(value)
    if isinstance(value, float):
        return None if math.isnan(value) or math.isinf(value) else value
    return decimal_string(value)


def _as_dict(row) -> Dict[str, Any]:
    if isinstance(row, BaseModel):
        return row.model_dump()
    return dict(row)


def render_csv(columns: Sequence[str], rows: Sequence) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        row = _as_dict(row)
        writer.writerow([cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def render_json(command: str, parameters: Dict[str, Any], columns: Sequence[str], rows: Sequence) -> str:
    meta = ExportMeta(
        command=command,
        parameters={k: _json_value(v) for k, v in parameters.items()},
        columns=list(columns),
    )
    body = {
        "meta": meta.model_dump(),
        "rows": [
            {column: _json_value(_as_dict(row).get(column)) for column in columns}
            for row in rows
        ],
    }
    return json.dumps(body, indent=2) + "\n"


def render(
    fmt: str,
    command: str,
    parameters: Dict[str, Any],
    columns: Sequence[str],
    rows: Sequence,
) -> str:
    if fmt == "json":
        return render_json(command, parameters, columns, rows)
    return render_csv(columns, rows)


def emit(text: str, out: Optional[str] = None) -> None:
    """Write data to ``out`` or stdout."""
    if out:
        with open(out, "w", newline="\n") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


def exact_row(quantity: str, parameters: str, value) -> Dict[str, Any]:
    """One line of an exact report: the fraction plus its decimal rendering."""
    if isinstance(value, (Fraction, int)):
        value = Fraction(value)
        return {
            "quantity": quantity,
            "parameters": parameters,
            "fraction": fraction_string(value),
            "decimal": decimal_string(value),
        }
    return {
        "quantity": quantity,
        "parameters": parameters,
        "fraction": "",
        "decimal": decimal_string(value),
    }


EXACT_COLUMNS: List[str] = ["quantity", "parameters", "fraction", "decimal"]
