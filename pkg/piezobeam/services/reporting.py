"""Report rendering: CSV files, JSON files and console tables."""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from pydantic import BaseModel

from piezobeam.config import config

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Fixed, locale-independent cell formatting."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return config.format_float(value)
    return str(value)


def table_rows(rows: Iterable[BaseModel]) -> tuple[List[str], List[List[str]]]:
    """Header and formatted cells from a list of row models (field order)."""
    rows = list(rows)
    if not rows:
        return [], []
    header = list(type(rows[0]).model_fields)
    cells = [[format_value(getattr(row, name)) for name in header] for row in rows]
    return header, cells


def render_csv(header: Sequence[str], cells: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(cells)
    return buffer.getvalue()


def write_csv(path: Path, rows: Iterable[BaseModel]) -> Path:
    header, cells = table_rows(rows)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(render_csv(header, cells))
    logger.info(f"Wrote {len(cells)} rows to {path}")
    return path


def write_json(path: Path, report: BaseModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(report.model_dump(mode="json"), indent=2) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Wrote JSON report to {path}")
    return path


def render_table(rows: Iterable[BaseModel], title: Optional[str] = None) -> str:
    """Aligned plain-text table for stdout."""
    header, cells = table_rows(rows)
    if not header:
        return title or ""
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)
