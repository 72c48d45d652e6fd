"""
Deterministic CSV / JSON rendering of command results.

Numbers are written with 12 significant digits using Python's locale-independent
float formatting, so identical inputs always give byte-identical output.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

SIGNIFICANT_DIGITS = 12
FORMATS = ("csv", "json")


def format_number(value: float) -> str:
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(format_number(value))
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    # numpy scalars
    if hasattr(value, "item"):
        return _json_value(value.item())
    return str(value)


@dataclass
class Report:
    """A table of rows sharing ``columns`` plus free-form metadata."""

    columns: Sequence[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add_row(self, **values: Any) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"Unknown report columns: {sorted(unknown)}")
        self.rows.append(values)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_csv_cell(_plain(row.get(column))) for column in self.columns])
        return buffer.getvalue()

    def to_json(self) -> str:
        payload = {
            "metadata": _json_value(self.metadata),
            "rows": [{column: _json_value(row.get(column)) for column in self.columns} for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"Unknown output format {fmt!r}; expected one of {FORMATS}")


def _plain(value: Any) -> Any:
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    return value
