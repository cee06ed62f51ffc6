"""Exact rational functions of one variable ``q`` over the rationals.

A value is stored as coprime ``numerator / denominator`` with a monic
denominator, so equal functions have identical representations.  Polynomial
arithmetic and gcds run in FLINT through ``python-flint``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from flint import fmpq, fmpq_poly

_ONE = fmpq_poly([1])
_ZERO = fmpq_poly([])


def _fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def _frac(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class RatFunc:
    """Element of ``Q(q)``; build with :meth:`of` or from :data:`Q`."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: fmpq_poly, den: fmpq_poly = _ONE, *, normalized: bool = False):
        if not normalized:
            if den.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if num.is_zero():
                num, den = _ZERO, _ONE
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num, den = num // g, den // g
                lead = den.coeffs()[-1]
                if lead != 1:
                    num, den = num / lead, den / lead
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def of(cls, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (int, Rational, fmpq)):
            return cls(fmpq_poly([_fmpq(value)]), _ONE, normalized=True)
        if isinstance(value, fmpq_poly):
            return cls(value, _ONE, normalized=True)
        raise TypeError(f"cannot build a rational function from {type(value).__name__}")

    # -- arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.den == _ONE and other.num.degree() <= 0:
            if other.num.is_zero():
                return RatFunc.of(0)
            return RatFunc(self.num * other.num, self.den, normalized=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        return RatFunc(self.num**n, self.den**n, normalized=True)

    # -- comparison and inspection

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(map(str, self.num.coeffs())), tuple(map(str, self.den.coeffs()))))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    @property
    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    @property
    def is_laurent(self) -> bool:
        """Denominator is a power of ``q``."""
        return self.den.degree() == 0 or self.den == fmpq_poly([0, 1]) ** self.den.degree()

    def numerator_coeffs(self) -> list[Fraction]:
        return [_frac(c) for c in self.num.coeffs()] or [Fraction(0)]

    def denominator_coeffs(self) -> list[Fraction]:
        return [_frac(c) for c in self.den.coeffs()]

    def __call__(self, q_value) -> Fraction:
        x = _fmpq(q_value)
        den = self.den(x)
        if den == 0:
            raise ZeroDivisionError(f"pole at q = {q_value}")
        return _frac(self.num(x) / den)

    def __str__(self):
        num = _poly_str(self.num)
        if self.den == _ONE:
            return num
        return f"({num})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"RatFunc({self})"


def _poly_str(p: fmpq_poly) -> str:
    coeffs = p.coeffs()
    if not coeffs:
        return "0"
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = _frac(coeffs[e])
        if c == 0:
            continue
        mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    head_sign, head = parts[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Rational, fmpq, fmpq_poly)):
        return RatFunc.of(x)
    return NotImplemented


Q = RatFunc(fmpq_poly([0, 1]), _ONE, normalized=True)
ZERO = RatFunc.of(0)
ONE = RatFunc.of(1)
