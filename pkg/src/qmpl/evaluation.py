"""Truncated evaluation of q-deformed and classical multiple polylogarithms.

Every series here is summed over ``0 < k_1 < ... < k_m <= K``: the cutoff binds
the outermost index only.  The nested sum is accumulated level by level with
prefix sums, so a depth-``m`` evaluation costs ``O(m K)`` scalar operations.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DivergentSeriesError, DomainError, InvalidParameterError, SingularPointError
from .qcalc import QParam, Regime, as_qparam, q_derivative
from .report import Verdict, VerificationReport, compare, rounding_budget
from .scalar import Scalar, unify


@dataclass(frozen=True)
class Composition:
    """Index tuple ``(n_1, ..., n_m)`` with every ``n_i >= 1``."""

    indices: tuple[int, ...]

    def __post_init__(self):
        indices = tuple(self.indices)
        if not indices:
            raise InvalidParameterError("a composition needs at least one index")
        if any(not isinstance(n, int) or n < 1 for n in indices):
            raise InvalidParameterError(f"composition indices must be integers >= 1: {indices}")
        object.__setattr__(self, "indices", indices)

    @classmethod
    def of(cls, value) -> "Composition":
        if isinstance(value, Composition):
            return value
        if isinstance(value, int):
            return cls((value,))
        if isinstance(value, str):
            return cls(tuple(int(p) for p in value.replace("(", "").replace(")", "").split(",")))
        return cls(tuple(value))

    @property
    def weight(self) -> int:
        return sum(self.indices)

    @property
    def depth(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __str__(self):
        return "(" + ",".join(map(str, self.indices)) + ")"


class TailMethod(str, enum.Enum):
    GEOMETRIC = "geometric"
    NONE = "none"


@dataclass(frozen=True)
class TruncationSpec:
    K: int
    tail_method: TailMethod = TailMethod.GEOMETRIC

    def __post_init__(self):
        if not isinstance(self.K, int) or self.K < 1:
            raise InvalidParameterError(f"cutoff K must be a positive integer, got {self.K!r}")

    @classmethod
    def of(cls, value) -> "TruncationSpec":
        return value if isinstance(value, TruncationSpec) else cls(int(value))


@dataclass(frozen=True)
class EvalResult:
    """``tail_bound`` is ``inf`` outside the convergence domain, None when not requested."""

    value: Scalar
    tail_bound: float | None
    terms_summed: int


# ---------------------------------------------------------------- kernels


def nested_sum(
    indices: Sequence[int], zs: Sequence[Scalar], base: Callable[[int], Scalar], K: int
) -> Scalar:
    """``sum_{0<k_1<...<k_m<=K} prod_j z_j**k_j * base(k_j)**n_j``.

    Zero indices are allowed (the factor is then 1).
    """
    one = zs[0].lift(1)
    zero = one.lift(0)
    m = len(indices)
    bases = [None] + [base(k) for k in range(1, K + 1)]
    powers: dict[int, list] = {}
    for n in set(indices):
        powers[n] = [None] + ([one] * K if n == 0 else [b**n for b in bases[1:]])

    # below[k]: sum over chains of the earlier levels ending strictly below k
    below = [one] * (K + 1)
    total = zero
    for level, (n, z) in enumerate(zip(indices, zs)):
        pw = powers[n]
        last = level == m - 1
        nxt = [zero] * (K + 1)
        running = zero
        zk = z**level if level else one
        for k in range(level + 1, K + 1):
            zk = zk * z
            nxt[k] = running
            running = running + below[k] * zk * pw[k]
        if last:
            total = running
        below = nxt
    return total


def _qbase(q: QParam):
    one = q.q.lift(1)
    qq = q.q

    def base(k):
        return one / (1 - qq**k)

    return base


def _classical_base(like: Scalar):
    one = like.lift(1)

    def base(k):
        return one / k

    return base


# ---------------------------------------------------------------- tail bounds


def _chain_tail(rho: float, m: int, K: int) -> float:
    """Upper bound for ``sum_{N>K} C(N-1, m-1) rho**N`` (number of chains times decay)."""
    if rho <= 0.0:
        return 0.0
    if rho >= 1.0:
        return math.inf
    total = (rho / (1.0 - rho)) ** m
    if K + 2 - m <= 0:
        return total
    ratio = rho * (K + 1) / (K + 2 - m)
    if ratio >= 1.0:
        return total
    log_first = math.log(math.comb(K, m - 1)) + (K + 1) * math.log(rho)
    first = math.exp(log_first) if log_first > -740 else 5e-324
    return min(total, first / (1.0 - ratio)) * (1 + 1e-12)


def _suffix_max(mags: Sequence[float]) -> float:
    prod, best = 1.0, 0.0
    for x in reversed(mags):
        prod *= x
        best = max(best, prod)
    return best


def _q_tail(indices, mags, q: QParam, K: int) -> float:
    m = len(indices)
    r = q.magnitude
    c = 1.0
    if q.regime is Regime.INSIDE:
        for j, n in enumerate(indices[:-1], start=1):
            c /= (1.0 - r**j) ** n
        c /= (1.0 - r ** (K + 1)) ** indices[-1]
        eff = list(mags)
    else:
        inv = 1.0 / r
        for j, n in enumerate(indices[:-1], start=1):
            c /= (1.0 - inv**j) ** n
        c /= (1.0 - inv ** (K + 1)) ** indices[-1]
        eff = [x * inv**n for x, n in zip(mags, indices)]
    return c * _chain_tail(_suffix_max(eff), m, K)


def _classical_tail(indices, mags, K: int) -> float:
    m = len(indices)
    rho = _suffix_max(mags)
    if rho < 1.0:
        c = 1.0
        for j, n in enumerate(indices[:-1], start=1):
            c /= j**n
        c /= (K + 1) ** indices[-1]
        return c * _chain_tail(rho, m, K)
    s, p = indices[-1], m - 1
    if s < 2 or 1 + math.log(K) < p / s:
        return math.inf
    # inner chains are bounded by H_{k-1}**p / p! <= (1 + ln k)**p / p!;
    # integrate (1 + ln x)**p x**-s over [K, inf)
    a, L = s - 1, math.log(K)
    acc = sum(
        math.factorial(p) / math.factorial(p - i) * (1 + L) ** (p - i) / a ** (i + 1)
        for i in range(p + 1)
    )
    return math.exp(-a * L) * acc / math.factorial(p) * (1 + 1e-12)


# ---------------------------------------------------------------- domain checks


def _suffix_products(zs: Sequence[Scalar]) -> list[Scalar]:
    out, prod = [], zs[0].lift(1)
    for z in reversed(zs):
        prod = prod * z
        out.append(prod)
    return out


def in_domain(zs: Sequence[Scalar], *, allow_boundary: bool) -> bool:
    limit = 0 if allow_boundary else -1
    return all(s.cmp_abs(1) <= limit for s in _suffix_products(zs))


def _prepare(comp, z, q=None):
    comp = Composition.of(comp)
    z = list(z)
    if len(z) != comp.depth:
        raise InvalidParameterError(f"composition {comp} needs {comp.depth} arguments, got {len(z)}")
    if q is None:
        return comp, unify(*z), None
    values = unify(q.q if isinstance(q, QParam) else q, *z)
    return comp, values[1:], as_qparam(values[0])


def _finish(value, tail, trunc, depth):
    if trunc.tail_method is TailMethod.NONE and math.isfinite(tail):
        tail = None
    return EvalResult(value=value, tail_bound=tail, terms_summed=math.comb(trunc.K, depth))


# ---------------------------------------------------------------- public evaluators


def eval_qmpl(comp, z, q, trunc, *, allow_divergent: bool = False) -> EvalResult:
    """Truncated ``Li_{n_1..n_m}(z_1..z_m; q)``.

    Convergence domain: every suffix product ``|z_j ... z_m|`` is ``< 1`` for
    ``|q| < 1`` and ``<= 1`` for ``|q| > 1``.  Outside it a :class:`DomainError`
    is raised unless ``allow_divergent`` is set, in which case the finite sum is
    returned with an infinite tail bound.
    """
    comp, zs, q = _prepare(comp, z, q)
    trunc = TruncationSpec.of(trunc)
    ok = in_domain(zs, allow_boundary=q.regime is Regime.OUTSIDE)
    if not ok and not allow_divergent:
        raise DomainError(f"arguments {[str(v) for v in zs]} lie outside the convergence domain")
    try:
        value = nested_sum(comp.indices, zs, _qbase(q), trunc.K)
    except ZeroDivisionError as exc:
        raise InvalidParameterError("1 - q**k vanished inside the cutoff") from exc
    tail = _q_tail(comp.indices, [v.magnitude() for v in zs], q, trunc.K) if ok else math.inf
    return _finish(value, tail, trunc, comp.depth)


def eval_classical_mpl(comp, z, trunc, *, allow_divergent: bool = False) -> EvalResult:
    """Truncated classical ``Li_{n_1..n_m}(z_1..z_m)``.

    Suffix products on the unit circle are admitted only when ``n_m > 1``.
    """
    comp, zs, _ = _prepare(comp, z)
    trunc = TruncationSpec.of(trunc)
    ok = in_domain(zs, allow_boundary=comp.indices[-1] > 1)
    if not ok and not allow_divergent:
        raise DomainError(f"arguments {[str(v) for v in zs]} lie outside the convergence domain")
    value = nested_sum(comp.indices, zs, _classical_base(zs[0]), trunc.K)
    tail = _classical_tail(comp.indices, [v.magnitude() for v in zs], trunc.K) if ok else math.inf
    return _finish(value, tail, trunc, comp.depth)


def eval_qmzv(comp, q, trunc) -> EvalResult:
    """Truncated ``zeta_q(n_1..n_m)``; numerically meaningful only for ``|q| > 1``."""
    comp = Composition.of(comp)
    q = as_qparam(q)
    if q.regime is Regime.INSIDE:
        raise DivergentSeriesError(
            "zeta_q diverges for |q| < 1 (terms tend to 1); use the formal ZetaWord algebra"
        )
    return eval_qmpl(comp, [q.q.lift(1)] * comp.depth, q, trunc)


def auto_cutoff(comp, z, q=None, target: float = 1e-20, K_max: int = 1 << 20) -> int:
    """Smallest power-of-two-refined ``K`` whose tail bound is at most ``target``.

    ``q=None`` selects the classical series.  Only the bound is computed, never
    the sum.
    """
    comp, zs, q = _prepare(comp, z, q)
    mags = [v.magnitude() for v in zs]

    def bound(K):
        if q is None:
            return _classical_tail(comp.indices, mags, K)
        return _q_tail(comp.indices, mags, q, K)

    hi = max(comp.depth, 1)
    while bound(hi) > target:
        if hi >= K_max:
            raise InvalidParameterError(f"no cutoff up to {K_max} reaches tail {target}")
        hi *= 2
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid >= comp.depth and bound(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------- checks


def check_derivative_relation(comp, j: int, z, q, trunc) -> VerificationReport:
    """Compare ``D_{z_j,q}`` of the truncated series with the lowered series.

    The right side is ``Li_{..,n_j - 1,..}(z; q) / ((1-q) z_j)`` at the same
    cutoff; the lowered index may be 0.  The relation holds term by term, so in
    exact mode the deviation must vanish identically.
    """
    comp, zs, q = _prepare(comp, z, q)
    trunc = TruncationSpec.of(trunc)
    if not 1 <= j <= comp.depth:
        raise InvalidParameterError(f"slot {j} out of range for depth {comp.depth}")
    if zs[j - 1].is_zero():
        raise SingularPointError("the q-derivative is undefined at z_j = 0")
    K, base = trunc.K, _qbase(q)

    def in_slot(w):
        args = list(zs)
        args[j - 1] = w
        return nested_sum(comp.indices, args, base, K)

    lhs = q_derivative(in_slot, zs[j - 1], q)
    lowered = list(comp.indices)
    lowered[j - 1] -= 1
    rhs = nested_sum(lowered, zs, base, K) / ((1 - q.q) * zs[j - 1])

    prec = q.q.precision_bits
    scale = (abs(lhs.magnitude()) + 1) / max((q.q - 1).magnitude(), 1e-300)
    budget = rounding_budget(prec, scale, K * comp.depth)
    params = {
        "comp": str(comp),
        "slot": j,
        "z": [str(v) for v in zs],
        "q": str(q),
        "K": K,
        "mode": q.mode.value,
        "precision_bits": prec,
    }
    return compare("derivative", params, lhs, rhs, budget, {"lowered": lowered})


def classical_limit_check(
    comp,
    z,
    q_sequence: Sequence,
    trunc,
    *,
    ratio_window: tuple[float, float] = (0.4, 0.6),
    trend_start: int = 0,
) -> VerificationReport:
    """Track ``d = |(1-q)**weight Li(z; q) - Li(z)|`` along ``q_sequence``.

    With at least two points from ``trend_start`` on, the verdict asks for
    strictly decreasing deviations whose successive ratios all fall in
    ``ratio_window`` (first-order convergence in ``1 - q``).
    """
    comp = Composition.of(comp)
    trunc = TruncationSpec.of(trunc)
    if not q_sequence:
        raise InvalidParameterError("q_sequence must be non-empty")
    qs = [as_qparam(v) for v in q_sequence]
    _, zs, _ = _prepare(comp, z, qs[0])
    classical = eval_classical_mpl(comp, zs, trunc)
    deviations, rescaled_values, tails = [], [], []
    for q in qs:
        res = eval_qmpl(comp, zs, q, trunc)
        scale = (1 - q.q) ** comp.weight
        rescaled = scale * res.value
        rescaled_values.append(rescaled)
        deviations.append((rescaled - classical.value).magnitude())
        tails.append((res.tail_bound or 0.0) * scale.magnitude() + (classical.tail_bound or 0.0))

    trend = deviations[trend_start:]
    ratios = [b / a if a else math.inf for a, b in zip(trend, trend[1:])]
    lo, hi = ratio_window
    if len(trend) < 2:
        verdict, budget = Verdict.UNSUPPORTED, math.inf
    else:
        ok = all(lo <= r <= hi for r in ratios)
        verdict = Verdict.TOLERANCE_PASS if ok else Verdict.FAIL
        # first-order contract: the final deviation is at most d_start * hi**steps
        budget = trend[0] * hi ** len(ratios) + tails[-1]
    params = {
        "comp": str(comp),
        "z": [str(v) for v in zs],
        "q_sequence": [str(q) for q in qs],
        "K": trunc.K,
        "mode": qs[0].mode.value,
        "precision_bits": qs[0].q.precision_bits,
    }
    return VerificationReport(
        relation_id="classical_limit",
        parameters=params,
        lhs=str(rescaled_values[-1]),
        rhs=str(classical.value),
        deviation=deviations[-1],
        exact_zero=False,
        tail_budget=budget,
        verdict=verdict,
        details={
            "deviations": deviations,
            "ratios": ratios,
            "trend_start": trend_start,
            "ratio_window": list(ratio_window),
        },
    )
