"""q-parameters, q-brackets, the q-derivative and Jackson q-integrals."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import (
    InvalidParameterError,
    SingularLatticePointError,
    SingularPointError,
    UnsupportedRegimeError,
)
from .scalar import Scalar, as_scalar

DEFAULT_TAIL_THRESHOLD = 1e-20
# relative size of an estimated tail still counted as converged
DEFAULT_TAIL_TOLERANCE = 1e-12


class Regime(str, enum.Enum):
    INSIDE = "inside"  # |q| < 1
    OUTSIDE = "outside"  # |q| > 1


class SingularPolicy(str, enum.Enum):
    ERROR = "error"
    DROP = "drop"


class Letter(str, enum.Enum):
    """Integration letters: ``OMEGA0`` is dt/t, ``OMEGA1`` is dt/(1-t)."""

    OMEGA0 = "omega0"
    OMEGA1 = "omega1"


@dataclass(frozen=True)
class QParam:
    """Deformation parameter ``q`` with its regime tag.

    ``q`` may not be 0 and may not lie on the unit circle, so ``1 - q**k`` never
    vanishes and every ``q`` is either strictly inside or strictly outside.
    """

    q: Scalar
    regime: Regime = field(init=False)

    def __post_init__(self):
        q = self.q
        if q.is_zero():
            raise InvalidParameterError("q must be nonzero")
        side = q.cmp_abs(1)
        if side == 0:
            if q == q.lift(1):
                raise InvalidParameterError("q = 1 is the undeformed point")
            raise InvalidParameterError(f"|q| = 1 is not supported (q = {q})")
        object.__setattr__(self, "regime", Regime.INSIDE if side < 0 else Regime.OUTSIDE)

    @classmethod
    def of(cls, value, like: Scalar | None = None) -> "QParam":
        if isinstance(value, QParam):
            if like is not None and value.q.mode is not like.mode:
                return cls(as_scalar(value.q, like))
            return value
        return cls(as_scalar(value, like))

    @property
    def mode(self):
        return self.q.mode

    @property
    def magnitude(self) -> float:
        return self.q.magnitude()

    def power(self, n: int) -> "QParam":
        return QParam(self.q**n)

    def __str__(self):
        return str(self.q)


def as_qparam(q, like: Scalar | None = None) -> QParam:
    return QParam.of(q, like)


def q_bracket(k: int, q) -> Scalar:
    """The q-integer ``[k]_q = (1 - q**k) / (1 - q)``."""
    if not isinstance(k, int) or k < 1:
        raise InvalidParameterError(f"q_bracket needs a positive integer, got {k!r}")
    q = as_qparam(q).q
    return (1 - q**k) / (1 - q)


def q_derivative(f: Callable[[Scalar], Scalar], z0, q) -> Scalar:
    """``(f(q*z0) - f(z0)) / ((q - 1)*z0)``."""
    q = as_qparam(q)
    z0 = as_scalar(z0, q.q)
    if z0.is_zero():
        raise SingularPointError("the q-derivative is undefined at z0 = 0")
    return (f(q.q * z0) - f(z0)) / ((q.q - 1) * z0)


def lattice_cap_for(q, threshold: float = DEFAULT_TAIL_THRESHOLD) -> int:
    """Smallest cap ``N`` with ``|q|**N <= threshold`` (``|q| < 1`` only)."""
    r = as_qparam(q).magnitude
    if r >= 1:
        raise UnsupportedRegimeError("the Jackson lattice needs |q| < 1")
    return max(1, math.ceil(math.log(threshold) / math.log(r)))


@dataclass(frozen=True)
class JacksonResult:
    value: Scalar
    tail_bound: float
    lattice_points: int
    dropped_points: int
    converged: bool


def _require_inside(q: QParam):
    if q.regime is not Regime.INSIDE:
        raise UnsupportedRegimeError("Jackson integration is only defined for |q| < 1")


def jackson_integral(
    f: Callable[[Scalar], Scalar],
    a,
    q,
    lattice_cap: int,
    singular_policy: SingularPolicy = SingularPolicy.ERROR,
    *,
    f_bound: float | None = None,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> JacksonResult:
    """Truncated Jackson integral ``a(1-q) * sum_{i=0}^{N} q**i f(a q**i)``.

    The tail bound is ``|a(1-q)| |q|**(N+1) / (1-|q|) * M`` where ``M`` is
    ``f_bound`` if given, else the largest ``|f|`` seen on the lattice.
    """
    q = as_qparam(q)
    _require_inside(q)
    a = as_scalar(a, q.q)
    if not a.is_real or a.real_sign() <= 0 or a.cmp_abs(1) > 0:
        raise InvalidParameterError(f"integration endpoint must lie in (0, 1], got {a}")
    if lattice_cap < 0:
        raise InvalidParameterError("lattice_cap must be nonnegative")
    policy = SingularPolicy(singular_policy)

    total = a.lift(0)
    qi = a.lift(1)
    seen_max = 0.0
    dropped = 0
    for i in range(lattice_cap + 1):
        try:
            fx = f(a * qi)
        except ZeroDivisionError as exc:
            if policy is SingularPolicy.ERROR:
                raise SingularLatticePointError(i) from exc
            dropped += 1
        else:
            total = total + qi * fx
            seen_max = max(seen_max, fx.magnitude())
        qi = qi * q.q
    value = a * (1 - q.q) * total

    r = q.magnitude
    bound = f_bound if f_bound is not None else seen_max
    tail = a.magnitude() * (1 - q.q).magnitude() * r ** (lattice_cap + 1) / (1 - r) * bound
    return JacksonResult(
        value=value,
        tail_bound=tail,
        lattice_points=lattice_cap + 1 - dropped,
        dropped_points=dropped,
        converged=tail <= tail_tolerance * max(1.0, value.magnitude()),
    )


def _iterated_sum(word: Sequence[Letter], q: QParam, cap: int) -> Scalar:
    one = q.q.lift(1)
    step = 1 - q.q
    weights: dict[Letter, list[Scalar]] = {}
    if Letter.OMEGA0 in word:
        weights[Letter.OMEGA0] = [step] * (cap + 1)
    if Letter.OMEGA1 in word:
        # the i = 0 point (t = 1) is the pole; it is always dropped here
        w1 = [one.lift(0)]
        qi = one
        for _ in range(cap):
            qi = qi * q.q
            w1.append(step * qi / (1 - qi))
        weights[Letter.OMEGA1] = w1

    # suffix sums: level k accumulates over i_k >= i_{k+1}
    inner = [one] * (cap + 1)
    for letter in word:
        g = weights[letter]
        acc = one.lift(0)
        level = [None] * (cap + 1)
        for i in range(cap, -1, -1):
            acc = acc + g[i] * inner[i]
            level[i] = acc
        inner = level
    return inner[0]


def jackson_iterated(
    word: Sequence[Letter | str],
    q,
    lattice_cap: int,
    singular_policy: SingularPolicy = SingularPolicy.ERROR,
    *,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> JacksonResult:
    """Iterated Jackson integral of ``word`` over ``t1 <= t2 <= ... <= tw <= 1``.

    Each ``t`` runs over the lattice ``q**i``, ``0 <= i <= lattice_cap``, and every
    level carries the Jackson weight ``(1-q) q**i``.  ``OMEGA1`` letters have a pole
    at the lattice point ``t = 1``; under ``DROP`` every lattice point that places
    one there is omitted and counted.

    Tail monitor: the sum is also taken at caps ``N//4`` and ``N//2``.  If the
    second increment is not much smaller than the first the series is flagged as
    non-convergent (``tail_bound = inf``); otherwise the increments are
    extrapolated geometrically to estimate the tail beyond ``N``.
    """
    q = as_qparam(q)
    _require_inside(q)
    word = [Letter(w) for w in word]
    if not word:
        raise InvalidParameterError("integration word must be non-empty")
    if lattice_cap < 4:
        raise InvalidParameterError("lattice_cap must be at least 4")
    policy = SingularPolicy(singular_policy)
    if Letter.OMEGA1 in word:
        if policy is SingularPolicy.ERROR:
            raise SingularLatticePointError(0, "dt/(1-t) is singular at the lattice point t = 1")
        # i_1 >= ... >= i_w, so a pole is hit iff the last dt/(1-t) slot has i = 0
        last = len(word) - word[::-1].index(Letter.OMEGA1)
        dropped = math.comb(lattice_cap + last - 1, last - 1)
    else:
        dropped = 0

    value = _iterated_sum(word, q, lattice_cap)
    half = _iterated_sum(word, q, lattice_cap // 2)
    quarter = _iterated_sum(word, q, lattice_cap // 4)
    first, second = (half - quarter).magnitude(), (value - half).magnitude()
    if second == 0.0:
        tail = 0.0
    elif first == 0.0 or second / first > 0.5:
        tail = math.inf
    else:
        rho = second / first
        tail = second * rho * rho / (1 - rho * rho)
    points = math.comb(lattice_cap + len(word), len(word))
    return JacksonResult(
        value=value,
        tail_bound=tail,
        lattice_points=points - dropped,
        dropped_points=dropped,
        converged=tail <= tail_tolerance * max(1.0, value.magnitude()),
    )
