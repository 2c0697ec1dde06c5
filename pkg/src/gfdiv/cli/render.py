"""Deterministic report rendering: JSON, CSV and aligned text, 12 significant digits."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

SIGNIFICANT = 12

Record = dict[str, Any]


@dataclass
class Outcome:
    """What a handler produced; ``failed`` feeds the ``--strict`` exit code."""

    records: list[Record] = field(default_factory=list)
    failed: bool = False


def format_number(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{SIGNIFICANT}g}"


def normalize(value: Any) -> Any:
    """Plain JSON-ready data with floats rounded to the output precision."""
    if isinstance(value, BaseModel):
        return normalize(value.model_dump())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return normalize(value.item())
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, float):
        return value if not math.isfinite(value) else float(format_number(value))
    if isinstance(value, Mapping):
        return {str(key): normalize(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return [normalize(item) for item in value.tolist()]
    if isinstance(value, Sequence):
        return [normalize(item) for item in value]
    return str(value)


def _flatten(record: Mapping[str, Any], prefix: str = "") -> dict[str, str]:
    flat: dict[str, str] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = ";".join(_cell(item) for item in value)
        else:
            flat[name] = _cell(value)
    return flat


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    if value is None:
        return ""
    if isinstance(value, list):
        return ";".join(_cell(item) for item in value)
    return str(value)


def _columns(rows: list[dict[str, str]]) -> list[str]:
    columns: list[str] = []
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    return columns


def render_json(records: list[Record]) -> str:
    payload: Any = records[0] if len(records) == 1 else records
    return json.dumps(normalize(payload), indent=2, allow_nan=True) + "\n"


def render_csv(records: list[Record]) -> str:
    rows = [_flatten(normalize(record)) for record in records]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=_columns(rows), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def render_pretty(records: list[Record]) -> str:
    rows = [_flatten(normalize(record)) for record in records]
    columns = _columns(rows)
    widths = {col: max(len(col), *(len(row.get(col, "")) for row in rows)) for col in columns}
    lines = ["  ".join(col.ljust(widths[col]) for col in columns)]
    lines.append("  ".join("-" * widths[col] for col in columns))
    lines.extend("  ".join(row.get(col, "").ljust(widths[col]) for col in columns) for row in rows)
    return "\n".join(line.rstrip() for line in lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "pretty": render_pretty}


def write_outcome(outcome: Outcome, fmt: str, output: str | None) -> None:
    text = RENDERERS[fmt](outcome.records) if outcome.records else ""
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
