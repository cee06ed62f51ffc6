"""Single evaluations and tabulated sweeps as plain row dictionaries."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import InvalidParameterError, UsageError
from ..evaluation import (
    Composition,
    auto_cutoff,
    eval_classical_mpl,
    eval_qmpl,
    eval_qmzv,
)
from ..qcalc import as_qparam
from ..scalar import Mode, bigfloat, parse_scalar
from .config import RunConfig

EVAL_KINDS = ("qmpl", "classical", "qmzv")
TABLE_KINDS = ("qmzv_grid", "limit_sweep")
MAX_AUTO_K = 1 << 16

QMZV_COLUMNS = ["q", "K", "value", "rescaled", "tail_bound"]
LIMIT_COLUMNS = ["j", "q", "K", "value", "rescaled", "classical", "deviation", "tail_bound"]


def json_bound(x: float | None):
    if x is None:
        return None
    return "unbounded" if x == float("inf") else x


def _cutoff(config: RunConfig, comp, z, q) -> int:
    if config.K is not None:
        return config.K
    try:
        return auto_cutoff(comp, z, q, config.tail_threshold, MAX_AUTO_K)
    except InvalidParameterError:
        return MAX_AUTO_K


def eval_command(kind: str, comp, z: Sequence[str], q: str | None, config: RunConfig) -> dict:
    """Evaluate one series; scalars are parsed from their ``"p/q"`` or decimal text.

    Without an explicit ``K`` the cutoff is the smallest one whose tail bound
    meets ``config.tail_threshold`` (capped at ``2**16``).
    """
    if kind not in EVAL_KINDS:
        raise UsageError(f"unknown eval kind {kind!r}; choose from {', '.join(EVAL_KINDS)}")
    comp = Composition.of(comp)

    def parse(text):
        return parse_scalar(str(text), config.mode, config.precision_bits)

    zs = [parse(v) for v in z]
    if kind == "classical":
        K = _cutoff(config, comp, zs, None)
        res = eval_classical_mpl(comp, zs, K)
    else:
        if q is None:
            raise UsageError(f"kind {kind} needs --q")
        qp = as_qparam(parse(q))
        if kind == "qmzv":
            if zs:
                raise UsageError("qmzv takes no --z arguments")
            zs = [qp.q.lift(1)] * comp.depth
            if qp.magnitude < 1:
                eval_qmzv(comp, qp, 1)  # raises the divergent-series error
        K = _cutoff(config, comp, zs, qp)
        res = eval_qmpl(comp, zs, qp, K) if kind == "qmpl" else eval_qmzv(comp, qp, K)
    return {
        "kind": kind,
        "comp": str(comp),
        "z": [str(v) for v in zs] if kind != "qmzv" else [],
        "q": None if q is None else str(parse(q)),
        "K": K,
        "mode": config.mode.value,
        "precision_bits": res.value.precision_bits,
        "value": str(res.value),
        "tail_bound": json_bound(res.tail_bound),
        "terms_summed": res.terms_summed,
    }


def _float(config: RunConfig, value):
    return bigfloat(Fraction(value) if isinstance(value, (int, Fraction)) else value, config.precision_bits)


def qmzv_grid(comp, q_values: Sequence[str], config: RunConfig) -> list[dict]:
    comp = Composition.of(comp)
    rows = []
    for text in q_values:
        qp = as_qparam(_float(config, text))
        ones = [qp.q.lift(1)] * comp.depth
        K = _cutoff(config, comp, ones, qp)
        res = eval_qmzv(comp, qp, K)
        rescaled = (1 - qp.q) ** comp.weight * res.value
        rows.append(
            {
                "q": text,
                "K": K,
                "value": str(res.value),
                "rescaled": str(rescaled),
                "tail_bound": json_bound(res.tail_bound),
            }
        )
    return rows


def limit_sweep(comp, z: Sequence[str], exponents: Sequence[int], config: RunConfig) -> list[dict]:
    comp = Composition.of(comp)
    zs = [_float(config, v) for v in z]
    if not exponents:
        return []
    K = _cutoff(config, comp, zs, None)
    classical = eval_classical_mpl(comp, zs, K)
    rows = []
    for j in exponents:
        q = 1 - Fraction(1, 2**j)
        qp = as_qparam(_float(config, q))
        res = eval_qmpl(comp, zs, qp, K)
        scale = (1 - qp.q) ** comp.weight
        rescaled = scale * res.value
        tail = (res.tail_bound or 0.0) * scale.magnitude() + (classical.tail_bound or 0.0)
        rows.append(
            {
                "j": j,
                "q": str(q),
                "K": K,
                "value": str(res.value),
                "rescaled": str(rescaled),
                "classical": str(classical.value),
                "deviation": (rescaled - classical.value).magnitude(),
                "tail_bound": json_bound(tail),
            }
        )
    return rows


def table_command(kind: str, comp, config: RunConfig, *, q_values=(), z=(), exponents=()) -> dict:
    """Tables are always evaluated in floating mode at ``config.precision_bits``."""
    if kind == "qmzv_grid":
        rows, columns = qmzv_grid(comp, list(q_values), config), QMZV_COLUMNS
    elif kind == "limit_sweep":
        rows, columns = limit_sweep(comp, list(z), list(exponents), config), LIMIT_COLUMNS
    else:
        raise UsageError(f"unknown table kind {kind!r}; choose from {', '.join(TABLE_KINDS)}")
    return {
        "kind": kind,
        "comp": str(Composition.of(comp)),
        "mode": Mode.FLOAT.value,
        "precision_bits": config.precision_bits,
        "columns": columns,
        "rows": rows,
    }
