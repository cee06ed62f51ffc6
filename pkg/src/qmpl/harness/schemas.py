"""Access to the JSON schemas shipped with the package."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

SCHEMA_NAMES = (
    "verification_report",
    "verify_output",
    "eval_result",
    "table",
    "error",
    "distribution_relation",
)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("qmpl.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)
