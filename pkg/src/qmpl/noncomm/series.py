"""Truncated formal series over normal-ordered monomials in q-commuting variables.

Coefficients live in the field of rational functions ``Q(q)``, which contains
the Laurent polynomials and every ``1/(1 - q**k)`` factor exactly.  The normal-ordering power of ``q`` is folded
into the coefficient, so a series is keyed by exponent tuples alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from ..errors import InvalidParameterError
from ..evaluation import Composition
from .ordering import concat_exponent
from .ratfunc import ONE, ZERO, Q, RatFunc

Exponents = tuple  # ((var, exp), ...) sorted by var
Slot = tuple  # sorted tuple of variable ids; (1, 2) is the merged slot z1*z2


def q_power(n: int):
    return Q**n


@lru_cache(maxsize=None)
def inv_one_minus_qk(k: int):
    return 1 / (1 - Q**k)


def make_slot(spec) -> Slot:
    ids = (spec,) if isinstance(spec, int) else tuple(spec)
    if not ids or any(not isinstance(v, int) or v < 1 for v in ids):
        raise InvalidParameterError(f"malformed slot {spec!r}")
    return tuple(sorted(ids))


def slot_str(slot: Slot) -> str:
    return "*".join(f"z{v}" for v in slot)


def _degree(exps: Exponents) -> int:
    return sum(e for _, e in exps)


class FormalSeries:
    """Sparse map from normal-ordered exponent tuples to ``Q(q)`` coefficients."""

    __slots__ = ("degree_cap", "coeffs")

    def __init__(self, degree_cap: int, coeffs: Mapping | Iterable = ()):
        if degree_cap < 0:
            raise InvalidParameterError("degree_cap must be nonnegative")
        self.degree_cap = degree_cap
        acc: dict = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for exps, c in items:
            exps = tuple(sorted((v, e) for v, e in exps if e))
            if _degree(exps) > degree_cap:
                continue
            acc[exps] = acc.get(exps, ZERO) + c
        self.coeffs = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def unit(cls, degree_cap: int) -> "FormalSeries":
        return cls(degree_cap, {(): ONE})

    @classmethod
    def monomial(cls, degree_cap: int, exps: Mapping[int, int] | Exponents, coeff=1) -> "FormalSeries":
        exps = tuple(exps.items()) if isinstance(exps, Mapping) else tuple(exps)
        return cls(degree_cap, {exps: RatFunc.of(coeff)})

    def coefficient(self, exps: Mapping[int, int] | Exponents):
        exps = tuple(sorted(exps.items() if isinstance(exps, Mapping) else exps))
        return self.coeffs.get(exps, ZERO)

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.degree_cap == other.degree_cap and self.coeffs == other.coeffs

    def __len__(self):
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other):
        if self.degree_cap != other.degree_cap:
            raise InvalidParameterError(
                f"degree caps differ ({self.degree_cap} vs {other.degree_cap})"
            )

    def __add__(self, other):
        self._check(other)
        return FormalSeries(self.degree_cap, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "FormalSeries":
        c = RatFunc.of(c)
        return FormalSeries(self.degree_cap, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        return multiply_series(self, other)

    def specialize(self, q_value: Fraction, values: Mapping[int, Fraction]) -> Fraction:
        """Numeric value with ``q`` and commuting stand-ins for each variable substituted."""
        total = Fraction(0)
        for exps, c in self.coeffs.items():
            term = c(q_value)
            for v, e in exps:
                term *= Fraction(values[v]) ** e
            total += term
        return total

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for exps, c in self.coeffs.items():
            mono = " ".join(f"z{v}^{e}" if e > 1 else f"z{v}" for v, e in exps) or "1"
            parts.append(f"({c}) {mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FormalSeries(D={self.degree_cap}, terms={len(self.coeffs)})"


def multiply_series(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    """Product with normal ordering; terms beyond the degree cap are dropped.

    Moving each generator of the right factor past the larger ids of the left
    factor costs ``q**-1`` per unit of exponent.
    """
    a._check(b)
    D = a.degree_cap
    acc: dict = {}
    for ma, ca in a.coeffs.items():
        da = _degree(ma)
        for mb, cb in b.coeffs.items():
            if da + _degree(mb) > D:
                continue
            exps = dict(ma)
            for v, e in mb:
                exps[v] = exps.get(v, 0) + e
            key = tuple(sorted(exps.items()))
            term = ca * cb
            shift = concat_exponent(ma, mb)
            if shift:
                term = term * Q**shift
            acc[key] = acc.get(key, ZERO) + term
    return FormalSeries(D, acc)


def _chains(sizes: Sequence[int], budget: int, start: int = 1):
    """Strictly increasing ``k`` tuples with ``sum(k_j * sizes[j]) <= budget``."""
    if not sizes:
        yield ()
        return
    rest_min = [0] * (len(sizes) + 1)
    for j in range(len(sizes) - 1, -1, -1):
        rest_min[j] = rest_min[j + 1] + sizes[j]

    def rec(j, lo, used):
        if j == len(sizes):
            yield ()
            return
        k = lo
        # later slots need indices above k; rest_min gives a safe lower estimate
        while used + k * sizes[j] + (k + 1) * rest_min[j + 1] <= budget:
            for tail in rec(j + 1, k + 1, used + k * sizes[j]):
                yield (k,) + tail
            k += 1

    yield from rec(0, start, 0)


def ordered_qmpl_series(comp, slots: Sequence, degree_cap: int) -> FormalSeries:
    """Expand the ordered ``Li_comp(slots; q)`` up to total degree ``degree_cap``.

    Exponent ``k_j`` attaches to every variable of slot ``j``; the monomial is
    written in increasing variable order with no extra power of ``q``, and the
    coefficient is ``1 / prod (1 - q**k_j)**n_j``.
    """
    comp = Composition.of(comp)
    slots = [make_slot(s) for s in slots]
    if len(slots) != comp.depth:
        raise InvalidParameterError(f"composition {comp} needs {comp.depth} slots, got {len(slots)}")
    sizes = [len(s) for s in slots]
    coeffs = []
    for ks in _chains(sizes, degree_cap):
        exps: dict[int, int] = {}
        c = ONE
        for k, n, slot in zip(ks, comp.indices, slots):
            for v in slot:
                exps[v] = exps.get(v, 0) + k
            c = c * inv_one_minus_qk(k) ** n
        coeffs.append((tuple(exps.items()), c))
    return FormalSeries(degree_cap, coeffs)


def fraction_coefficients(c) -> dict:
    """Numerator and denominator coefficient arrays (ascending powers of q) as strings."""

    return {
        "numerator": [str(v) for v in c.numerator_coeffs()],
        "denominator": [str(v) for v in c.denominator_coeffs()],
    }


def coefficient_ring(values: Iterable) -> str:
    """Smallest of ``Q``, ``Q[q, 1/q]`` and ``Q(q)`` that holds every value."""
    ring = "Q"
    for c in values:
        if c.is_constant:
            continue
        if c.is_laurent:
            ring = "Q[q,1/q]"
        else:
            return "Q(q)"
    return ring
