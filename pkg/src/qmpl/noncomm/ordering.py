"""Normal ordering of words in q-commuting generators.

The generators obey ``z_i z_j = q z_j z_i`` for ``i < j``; read right to left,
``z_j z_i = q**-1 z_i z_j``.  The normal form writes generators in increasing id
order, so every adjacent swap that moves a higher id to the right costs one
factor ``q**-1``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class NormalMonomial:
    """``q**q_exponent * z_{i1}**e1 * z_{i2}**e2 ...`` with ``i1 < i2 < ...``."""

    q_exponent: int
    exponents: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def __str__(self):
        body = " ".join(f"z{i}" if e == 1 else f"z{i}^{e}" for i, e in self.exponents) or "1"
        return body if self.q_exponent == 0 else f"q^{self.q_exponent} {body}"


def _check_word(word: Iterable[int]) -> list[int]:
    out = list(word)
    if any(not isinstance(v, int) or v < 1 for v in out):
        raise InvalidParameterError(f"variable ids must be positive integers: {out}")
    return out


def inversion_count(word: Sequence[int]) -> int:
    """Pairs of positions ``a < b`` with ``word[a] > word[b]``."""
    return sum(1 for a in range(len(word)) for b in range(a + 1, len(word)) if word[a] > word[b])


def _collect(word: Sequence[int]) -> tuple[tuple[int, int], ...]:
    exps: dict[int, int] = {}
    for v in word:
        exps[v] = exps.get(v, 0) + 1
    return tuple(sorted(exps.items()))


def normalize_monomial(word: Sequence[int], strategy: str | random.Random = "left") -> NormalMonomial:
    """Sort ``word`` by adjacent swaps, collecting ``q**-1`` per swap.

    ``strategy`` picks which descent to resolve next: ``"left"`` (leftmost),
    ``"right"`` (rightmost), or a :class:`random.Random` for a random choice.
    The result does not depend on it.
    """
    w = _check_word(word)
    q_exp = 0
    while True:
        descents = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
        if not descents:
            break
        if isinstance(strategy, random.Random):
            p = strategy.choice(descents)
        elif strategy == "left":
            p = descents[0]
        elif strategy == "right":
            p = descents[-1]
        else:
            raise InvalidParameterError(f"unknown strategy {strategy!r}")
        w[p], w[p + 1] = w[p + 1], w[p]
        q_exp -= 1
    return NormalMonomial(q_exp, _collect(w))


def concat_exponent(left: Sequence[tuple[int, int]], right: Sequence[tuple[int, int]]) -> int:
    """q-exponent picked up when normal monomials ``left * right`` are reordered."""
    inv = 0
    for i, ei in left:
        for j, ej in right:
            if i > j:
                inv += ei * ej
    return -inv
