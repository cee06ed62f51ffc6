"""Deterministic JSON and RFC 4180 CSV rendering."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

from ..report import VerificationReport
from .config import RunConfig

REPORT_COLUMNS = [
    "relation_id",
    "verdict",
    "deviation",
    "tail_budget",
    "lhs",
    "rhs",
    "parameters",
    "details",
]


def _finite(obj):
    """Replace non-finite floats, which JSON cannot carry, by tags."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("unbounded" if obj > 0 else "-unbounded")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def to_json(obj) -> str:
    return json.dumps(_finite(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def to_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    # csv's default dialect already quotes per RFC 4180 and ends lines with CRLF
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def verify_payload(reports: Sequence[VerificationReport], config: RunConfig, suites: Sequence[str]) -> dict:
    verdicts: dict[str, int] = {}
    for r in reports:
        verdicts[r.verdict.value] = verdicts.get(r.verdict.value, 0) + 1
    return {
        "config": config.to_dict(),
        "suites": list(suites),
        "reports": [r.to_dict() for r in reports],
        "summary": {
            "total": len(reports),
            "verdicts": verdicts,
            "failed": sum(1 for r in reports if r.verdict.value == "Fail"),
        },
    }
