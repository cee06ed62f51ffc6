"""Words of formal zeta_q symbols under the graded exchange rule.

Letters are compositions, ordered canonically by ``(weight, indices)``.  For
letters ``A`` before ``B`` in that order the defining relation is

    zeta(A) zeta(B) = q**(w(A) w(B)) zeta(B) zeta(A),

so swapping an out-of-order adjacent pair ``[B, A] -> [A, B]`` multiplies the
word by ``q**(-w(A) w(B))``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import InvalidParameterError
from ..evaluation import Composition


def letter_key(c: Composition) -> tuple:
    return (c.weight, c.indices)


@dataclass(frozen=True)
class ZetaWord:
    """``q**q_exponent * zeta(letters[0]) zeta(letters[1]) ...``."""

    q_exponent: int
    letters: tuple[Composition, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(Composition.of(c) for c in self.letters))
        if not isinstance(self.q_exponent, int):
            raise InvalidParameterError("q_exponent must be an integer")

    @classmethod
    def of(cls, letters: Iterable, q_exponent: int = 0) -> "ZetaWord":
        return cls(q_exponent, tuple(letters))

    @classmethod
    def parse(cls, text: str) -> "ZetaWord":
        """``"3|2"`` or ``"1,1|2"``: letters separated by ``|``, indices by commas."""
        text = text.strip()
        if not text:
            return cls(0, ())
        return cls(0, tuple(Composition.of(part) for part in text.split("|")))

    @property
    def is_normal(self) -> bool:
        keys = [letter_key(c) for c in self.letters]
        return keys == sorted(keys)

    def to_dict(self) -> dict:
        return {"q_exponent": self.q_exponent, "letters": [list(c.indices) for c in self.letters]}

    def __str__(self):
        body = " ".join(f"zeta{c}" for c in self.letters) or "1"
        return body if self.q_exponent == 0 else f"q^{self.q_exponent} {body}"


def _swap_factor(left: Composition, right: Composition) -> int:
    return -left.weight * right.weight


def zeta_word_normal_form(w: ZetaWord, strategy: str | random.Random = "left") -> ZetaWord:
    """Sort letters canonically, collecting the exchange factors.

    ``strategy`` is ``"left"`` (left-to-right bubble passes), ``"right"``
    (right-to-left passes) or a :class:`random.Random` choosing any out-of-order
    adjacent pair.  The result is the same for all of them.
    """
    letters = list(w.letters)
    exp = w.q_exponent
    n = len(letters)

    def out_of_order(p):
        return letter_key(letters[p]) > letter_key(letters[p + 1])

    def swap(p):
        nonlocal exp
        exp += _swap_factor(letters[p], letters[p + 1])
        letters[p], letters[p + 1] = letters[p + 1], letters[p]

    if isinstance(strategy, random.Random):
        while True:
            bad = [p for p in range(n - 1) if out_of_order(p)]
            if not bad:
                break
            swap(strategy.choice(bad))
    elif strategy in ("left", "right"):
        order = range(n - 1) if strategy == "left" else range(n - 2, -1, -1)
        changed = True
        while changed:
            changed = False
            for p in order:
                if out_of_order(p):
                    swap(p)
                    changed = True
    else:
        raise InvalidParameterError(f"unknown strategy {strategy!r}")
    return ZetaWord(exp, tuple(letters))


def zeta_word_product(u: ZetaWord, v: ZetaWord, strategy: str | random.Random = "left") -> ZetaWord:
    """Concatenate, add the q-exponents, and bring the result to normal form."""
    joined = ZetaWord(u.q_exponent + v.q_exponent, u.letters + v.letters)
    return zeta_word_normal_form(joined, strategy)


def exchange_exponent(letters: Sequence[Composition]) -> int:
    """Exponent acquired by normalizing ``letters``, counted pair by pair."""
    letters = [Composition.of(c) for c in letters]
    total = 0
    for i in range(len(letters)):
        for j in range(i + 1, len(letters)):
            if letter_key(letters[i]) > letter_key(letters[j]):
                total -= letters[i].weight * letters[j].weight
    return total
