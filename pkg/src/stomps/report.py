"""CSV/JSON emitters with a stable column order."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path


def _as_row(record) -> dict:
    for attr in ("table_row", "row"):
        fn = getattr(record, attr, None)
        if callable(fn):
            return fn()
    if isinstance(record, dict):
        return dict(record)
    raise TypeError(f"cannot turn {type(record).__name__} into a report row")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(v) for v in value)
    return str(value)


def render(records, fmt: str = "csv") -> str:
    """Serialize records; the first record fixes the column order."""
    rows = [_as_row(r) for r in records]
    if not rows:
        raise ValueError("no records to report")
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}; use csv or json")
    columns = list(rows[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        if list(row) != columns:
            raise ValueError("records do not share a column layout")
        w.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def emit_report(records, fmt: str, path: str | Path) -> Path:
    """Write ``records`` as CSV (header row, 12 significant digits) or JSON.

    The text is rendered before the file is opened, so an empty or malformed
    record list leaves no file behind.
    """
    text = render(list(records), fmt)
    path = Path(path)
    path.write_text(text)
    return path
