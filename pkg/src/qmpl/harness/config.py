"""Run configuration shared by the batch runner, the tables and the CLI."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from ..errors import UsageError
from ..scalar import DEFAULT_PRECISION, MIN_PRECISION, Mode, Scalar, bigfloat, exact

CONFIG_ENV = "QMPL_CONFIG"
FORMATS = ("json", "csv")
MAX_SEED = 2**64


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output.

    ``K`` and ``lattice_cap`` may be None, in which case each suite or command
    picks its own default (or derives one from a tail bound).
    """

    mode: Mode = Mode.EXACT
    precision_bits: int = DEFAULT_PRECISION
    K: int | None = None
    lattice_cap: int | None = None
    seed: int = 1
    format: str = "json"
    degree_cap: int = 12
    tail_threshold: float = 1e-20

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", Mode(self.mode))
        except ValueError as exc:
            raise UsageError(f"unknown mode {self.mode!r}") from exc
        if self.precision_bits < MIN_PRECISION:
            raise UsageError(f"precision must be at least {MIN_PRECISION} bits")
        if self.K is not None and self.K < 1:
            raise UsageError("K must be a positive integer")
        if self.lattice_cap is not None and self.lattice_cap < 4:
            raise UsageError("lattice cap must be at least 4")
        if not 0 <= self.seed < MAX_SEED:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")
        if self.degree_cap < 1:
            raise UsageError("degree cap must be positive")
        if not self.tail_threshold > 0:
            raise UsageError("tail threshold must be positive")

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        return cls().updated(**data)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "RunConfig":
        """Explicit ``path``, else the file named by ``$QMPL_CONFIG``, else defaults."""
        path = path or os.environ.get(CONFIG_ENV)
        return cls.from_file(path) if path else cls()

    def updated(self, **changes) -> "RunConfig":
        known = {f.name for f in fields(self)}
        unknown = set(changes) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def scalar(self, value: Fraction | int | str) -> Scalar:
        if self.mode is Mode.EXACT:
            return exact(value)
        return bigfloat(Fraction(value) if isinstance(value, (int, Fraction)) else value, self.precision_bits)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["mode"] = self.mode.value
        return out
