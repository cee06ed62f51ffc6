"""Quasi-shuffle (stuffle) algebra of q-MPL symbols and the distribution relations.

Words are symbolic: each letter pairs an index with a formal product of
arguments, so ``(1, ("x", "y"))`` stands for the merged letter ``1; x*y``.
Numeric checks bind the symbols to scalars at evaluation time.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import InvalidParameterError, ModeError
from .evaluation import Composition, TruncationSpec, eval_qmpl
from .qcalc import QParam, as_qparam
from .report import VerificationReport, compare, rounding_budget
from .scalar import Scalar, nth_roots, unify

Atom = str | Scalar
Arg = tuple  # sorted tuple of atoms: a formal product
Letter = tuple[int, Arg]


def _atom_key(atom):
    return (0, atom) if isinstance(atom, str) else (1, str(atom))


def make_arg(*atoms) -> Arg:
    flat = []
    for a in atoms:
        flat.extend(a if isinstance(a, tuple) else (a,))
    return tuple(sorted(flat, key=_atom_key))


def merge_letters(a: Letter, b: Letter) -> Letter:
    """Two letters on the same summation index: indices add, arguments multiply."""
    return (a[0] + b[0], make_arg(a[1], b[1]))


@dataclass(frozen=True)
class IndexedWord:
    """One symbol ``Li_{n_1..n_m}(a_1..a_m; q)``; letter ``j`` sits on index ``k_j``."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        letters = tuple((int(n), make_arg(arg)) for n, arg in self.letters)
        if not letters:
            raise InvalidParameterError("an indexed word needs at least one letter")
        for n, arg in letters:
            if n < 1 or not arg:
                raise InvalidParameterError(f"malformed letter ({n}, {arg})")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def of(cls, value) -> "IndexedWord":
        if isinstance(value, IndexedWord):
            return value
        return cls(tuple(value))

    @classmethod
    def from_parts(cls, comp, args: Sequence) -> "IndexedWord":
        comp = Composition.of(comp)
        if len(args) != comp.depth:
            raise InvalidParameterError("one argument per index is required")
        return cls(tuple(zip(comp.indices, args)))

    @property
    def composition(self) -> Composition:
        return Composition(tuple(n for n, _ in self.letters))

    @property
    def args(self) -> tuple[Arg, ...]:
        return tuple(arg for _, arg in self.letters)

    @property
    def depth(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(n for n, _ in self.letters)

    def bind(self, values: Mapping[str, Scalar] | None = None) -> list:
        """Multiply out each formal argument using ``values`` for the symbols."""
        values = values or {}
        out = []
        for arg in self.args:
            prod = None
            for atom in arg:
                v = values[atom] if isinstance(atom, str) else atom
                prod = v if prod is None else prod * v
            out.append(prod)
        return out

    def __str__(self):
        comp = ",".join(str(n) for n, _ in self.letters)
        args = ",".join("*".join(map(str, arg)) for arg in self.args)
        return f"Li_{{{comp}}}({args})"

    def __lt__(self, other):
        return _word_key(self) < _word_key(other)


def _word_key(word: IndexedWord):
    return tuple((n, tuple(_atom_key(a) for a in arg)) for n, arg in word.letters)


class QMPLExpr:
    """Finite rational linear combination of :class:`IndexedWord` symbols.

    Kept canonical: like words merged, zero coefficients dropped.  Products use
    the stuffle product extended bilinearly.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[IndexedWord, Fraction] | Iterable = ()):
        acc: dict[IndexedWord, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for word, c in items:
            word = IndexedWord.of(word)
            acc[word] = acc.get(word, Fraction(0)) + Fraction(c)
        self.terms = {w: c for w, c in sorted(acc.items(), key=lambda t: _word_key(t[0])) if c}

    @classmethod
    def word(cls, word) -> "QMPLExpr":
        return cls({IndexedWord.of(word): 1})

    def __eq__(self, other):
        if not isinstance(other, QMPLExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __add__(self, other):
        return QMPLExpr(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "QMPLExpr":
        return QMPLExpr({w: v * Fraction(c) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        acc: list = []
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                acc.extend((w, ca * cb * c) for w, c in stuffle_product(wa, wb).terms.items())
        return QMPLExpr(acc)

    __rmul__ = scale

    def evaluate(self, values: Mapping[str, Scalar] | None, q, trunc) -> Scalar:
        total = None
        for word, c in self.terms.items():
            term = eval_qmpl(word.composition, word.bind(values), q, trunc).value * c
            total = term if total is None else total + term
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms.items():
            parts.append(str(w) if c == 1 else f"{c}*{w}")
        return " + ".join(parts)

    def __repr__(self):
        return f"QMPLExpr({self})"


@lru_cache(maxsize=4096)
def _stuffle(u: tuple, v: tuple) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    a, b = u[0], v[0]
    acc: Counter = Counter()
    for w, c in _stuffle(u[1:], v):
        acc[(a,) + w] += c
    for w, c in _stuffle(u, v[1:]):
        acc[(b,) + w] += c
    for w, c in _stuffle(u[1:], v[1:]):
        acc[(merge_letters(a, b),) + w] += c
    return tuple(acc.items())


def stuffle_product(a, b) -> QMPLExpr:
    """Quasi-shuffle product of two words.

    Sums over all order-preserving ways to lay both index chains on one chain;
    letters that share a summation index merge (indices add, arguments multiply),
    which is exact for the q-weights because the ``(1 - q**k)`` powers add.
    """
    a, b = IndexedWord.of(a), IndexedWord.of(b)
    return QMPLExpr((IndexedWord(w), c) for w, c in _stuffle(a.letters, b.letters))


def verify_stuffle_numeric(a, b, values: Mapping[str, Scalar] | None, q, trunc) -> VerificationReport:
    """Check ``Li(a) * Li(b) == sum of stuffle terms`` with all series cut at the same K.

    The grid of outer indices splits exactly into the stuffle chains, so the
    truncated identity is exact; floating mode is allowed rounding only.
    """
    a, b = IndexedWord.of(a), IndexedWord.of(b)
    trunc = TruncationSpec.of(trunc)
    names = sorted({x for w in (a, b) for arg in w.args for x in arg if isinstance(x, str)})
    values = dict(values or {})
    unified = unify(q.q if isinstance(q, QParam) else q, *(values[n] for n in names))
    q = as_qparam(unified[0])
    values = dict(zip(names, unified[1:]))

    lhs = eval_qmpl(a.composition, a.bind(values), q, trunc).value
    lhs = lhs * eval_qmpl(b.composition, b.bind(values), q, trunc).value
    expansion = stuffle_product(a, b)
    rhs = expansion.evaluate(values, q, trunc)
    budget = rounding_budget(q.q.precision_bits, lhs.magnitude() + 1, trunc.K * len(expansion) * 4)
    params = {
        "a": str(a),
        "b": str(b),
        "values": {k: str(v) for k, v in values.items()},
        "q": str(q),
        "K": trunc.K,
        "mode": q.mode.value,
        "precision_bits": q.q.precision_bits,
    }
    return compare("stuffle", params, lhs, rhs, budget, {"expansion": str(expansion)})


# ---------------------------------------------------------------- distribution relations

_PROVEN = {(2,), (1, 1)}


@dataclass(frozen=True)
class DistributionRelation:
    """``Li_comp(x; q**n) = sum_i coefficient * Li_comp(roots_i; q)``."""

    comp: Composition
    x: tuple
    n: int
    coefficient: Fraction
    roots: tuple[tuple, ...]
    experimental: bool = False

    def to_dict(self) -> dict:
        return {
            "comp": str(self.comp),
            "x": [str(v) for v in self.x],
            "n": self.n,
            "lhs": {"comp": str(self.comp), "args": [str(v) for v in self.x], "q_power": self.n},
            "rhs": [
                {"coefficient": str(self.coefficient), "comp": str(self.comp), "args": [str(v) for v in r]}
                for r in self.roots
            ],
            "experimental": self.experimental,
        }


def distribution_expand(comp, x: Sequence, n: int, *, experimental: bool = False) -> DistributionRelation:
    """Enumerate the right side of the distribution relation.

    All ``n**depth`` tuples of ``n``-th roots appear with coefficient ``n**-depth``.
    Only the compositions ``(2)`` and ``(1, 1)`` are accepted unless
    ``experimental`` is set.  In exact mode the roots must be Gaussian rationals.
    """
    comp = Composition.of(comp)
    if comp.indices not in _PROVEN and not experimental:
        raise InvalidParameterError(
            f"distribution relation only established for (2) and (1,1), not {comp}; "
            "pass experimental=True to expand it anyway"
        )
    if not isinstance(n, int) or n < 1:
        raise InvalidParameterError("n must be a positive integer")
    xs = unify(*x)
    if len(xs) != comp.depth:
        raise InvalidParameterError(f"composition {comp} needs {comp.depth} arguments")
    try:
        per_slot = [nth_roots(v, n) for v in xs]
    except ModeError as exc:
        raise ModeError(f"{exc} (distribution relation, n={n})") from exc
    roots = tuple(itertools.product(*per_slot))
    return DistributionRelation(
        comp=comp,
        x=tuple(xs),
        n=n,
        coefficient=Fraction(1, n**comp.depth),
        roots=roots,
        experimental=comp.indices not in _PROVEN,
    )


def verify_distribution(relation: DistributionRelation, q, K: int) -> VerificationReport:
    """Evaluate the left side at cutoff ``K // n`` and every root term at ``K``.

    Sums over roots of unity kill every index not divisible by ``n`` and the
    survivors reindex as ``k = n*m``, so with this matching the truncated sides
    agree term by term.
    """
    n = relation.n
    q = as_qparam(q, relation.x[0])
    M = K // n
    if M < relation.comp.depth:
        raise InvalidParameterError(f"cutoff {K} too small for n={n}, depth {relation.comp.depth}")
    left = eval_qmpl(relation.comp, relation.x, q.power(n), M)
    lhs = left.value
    coef = relation.coefficient
    rhs, tails = None, left.tail_bound or 0.0
    for roots in relation.roots:
        res = eval_qmpl(relation.comp, roots, q, K)
        rhs = res.value * coef if rhs is None else rhs + res.value * coef
        tails += float(coef) * (res.tail_bound or 0.0)
    prec = q.q.precision_bits
    budget = tails + rounding_budget(prec, lhs.magnitude() + 1, K * len(relation.roots) * 4)
    params = {
        "comp": str(relation.comp),
        "x": [str(v) for v in relation.x],
        "n": n,
        "q": str(q),
        "K": K,
        "lhs_cutoff": M,
        "mode": q.mode.value,
        "precision_bits": prec,
    }
    details = {"root_terms": len(relation.roots), "coefficient": str(coef)}
    if relation.experimental:
        details["experimental"] = True
    return compare("distribution", params, lhs, rhs, budget, details)

