"""Result rows and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from typing import Iterable, List, Mapping, Optional

from . import __version__

SCHEMA_VERSION = "1"

ROW_ERROR = "error"
ROW_MIN_BINARY = "min_photons_binary"
ROW_MIN_IDEAL = "min_photons_ideal"


@dataclass(frozen=True)
class ResultRow:
    row_type: str
    m: int
    nc: Optional[float] = None
    ndc: Optional[float] = None
    strategy: Optional[str] = None
    analytic_error: Optional[float] = None
    threshold_h: Optional[float] = None
    threshold_v: Optional[float] = None
    floor_h: Optional[int] = None
    floor_v: Optional[int] = None
    binary_valid: Optional[bool] = None
    empirical_error: Optional[float] = None
    standard_error: Optional[float] = None


COLUMNS = [f.name for f in fields(ResultRow)]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 1e15:
            return str(int(value))
        return format(value, ".12g")
    return str(value)


def parse_value(text: str, column: str):
    """Inverse of format_value for one CSV cell."""
    if text == "":
        return None
    if column in ("row_type", "strategy"):
        return text
    if column == "binary_valid":
        return text == "true"
    if column in ("m", "floor_h", "floor_v"):
        return int(text)
    return float(text)


def _json_value(value):
    if isinstance(value, float):
        return float(format(value, ".12g"))
    return value


def metadata_lines(metadata: Mapping) -> List[str]:
    return [f"# {key}: {value}" for key, value in metadata.items()]


def base_metadata(**extra) -> dict:
    meta = {"schema_version": SCHEMA_VERSION, "tool": "photonqfa", "tool_version": __version__}
    meta.update(extra)
    return meta


def rows_to_csv(rows: Iterable[ResultRow], metadata: Mapping) -> str:
    buf = io.StringIO()
    buf.write(f"# photonqfa result rows, schema {SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([format_value(getattr(row, c)) for c in COLUMNS])
    for line in metadata_lines(metadata):
        buf.write(line + "\n")
    return buf.getvalue()


def rows_to_json(rows: Iterable[ResultRow], metadata: Mapping) -> str:
    payload = {
        "metadata": dict(metadata),
        "rows": [{k: _json_value(v) for k, v in asdict(row).items()} for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def read_csv_rows(text: str) -> List[ResultRow]:
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.DictReader(lines)
    return [ResultRow(**{c: parse_value(r[c], c) for c in COLUMNS}) for r in reader]


def read_csv_metadata(text: str) -> dict:
    meta = {}
    for line in text.splitlines():
        if line.startswith("# ") and ": " in line:
            key, value = line[2:].split(": ", 1)
            meta[key] = value
    return meta
