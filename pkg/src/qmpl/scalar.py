"""Scalars in two modes: exact complex rationals and fixed-precision complex floats.

Exact scalars are pairs of :class:`fractions.Fraction`; floating scalars hold a raw
``mpmath.libmp`` complex tuple together with its precision in bits.  All arithmetic
goes through the ``libmp`` primitives with an explicit precision, so nothing here
touches mpmath's global context.

Plain ``int`` and ``Fraction`` operands are lifted into whatever mode the other
operand has.  Combining an exact scalar with a floating one raises
:class:`~qmpl.errors.ModeMismatchError`.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from numbers import Rational

from mpmath import libmp

from .errors import ModeError, ModeMismatchError

DEFAULT_PRECISION = 128
MIN_PRECISION = 53

_RND = libmp.round_nearest


class Mode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class Scalar:
    """Common base for :class:`ExactScalar` and :class:`FloatScalar`."""

    __slots__ = ()
    mode: Mode

    @property
    def precision_bits(self) -> int | None:
        return None

    def lift(self, value) -> "Scalar":
        """Return ``value`` as a scalar of the same mode (and precision) as ``self``."""
        raise NotImplementedError

    def is_zero(self) -> bool:
        raise NotImplementedError

    def __radd__(self, other):
        return self.__add__(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pos__(self):
        return self

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other):
        raise NotImplementedError


class ExactScalar(Scalar):
    """Complex rational ``re + im*i``; never rounds."""

    __slots__ = ("re", "im")
    mode = Mode.EXACT

    def __init__(self, re: Rational | int = 0, im: Rational | int = 0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    def lift(self, value):
        return exact(value)

    def _coerce(self, other):
        if type(other) is ExactScalar:
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(other)
        if isinstance(other, FloatScalar):
            raise ModeMismatchError("cannot combine exact and floating scalars")
        if isinstance(other, (float, complex)):
            raise ModeMismatchError("python floats cannot enter an exact expression")
        return NotImplemented

    def is_zero(self):
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExactScalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExactScalar(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ExactScalar(a * c)
        return ExactScalar(a * c - b * d, a * d + b * c)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("exact scalar division by zero")
            return ExactScalar(a / c, b / c)
        n = c * c + d * d
        return ExactScalar((a * c + b * d) / n, (b * c - a * d) / n)

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if not self.im:
            return ExactScalar(self.re**n)
        if n < 0:
            return ExactScalar(1) / (self ** (-n))
        result, base = ExactScalar(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return ExactScalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    def cmp_abs(self, bound) -> int:
        """Sign of ``|self| - bound`` for a nonnegative rational ``bound``."""
        lhs, rhs = self.abs2(), Fraction(bound) ** 2
        return (lhs > rhs) - (lhs < rhs)

    def real_sign(self) -> int:
        return (self.re > 0) - (self.re < 0)

    def to_fraction(self) -> Fraction:
        if self.im:
            raise ModeError(f"{self} is not real")
        return self.re

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}j"

    def __repr__(self):
        return f"ExactScalar({self})"


class FloatScalar(Scalar):
    """Complex floating value carried at ``prec`` bits (``prec >= 53``)."""

    __slots__ = ("_v", "prec")
    mode = Mode.FLOAT

    def __init__(self, raw, prec: int):
        self._v = raw
        self.prec = prec

    @property
    def precision_bits(self):
        return self.prec

    def lift(self, value):
        return bigfloat(value, self.prec)

    def _coerce(self, other):
        if type(other) is FloatScalar:
            return other
        if isinstance(other, (int, Fraction, float, complex)):
            return bigfloat(other, self.prec)
        if isinstance(other, ExactScalar):
            raise ModeMismatchError("cannot combine exact and floating scalars")
        return NotImplemented

    def is_zero(self):
        return self._v[0] == libmp.fzero and self._v[1] == libmp.fzero

    @property
    def is_real(self) -> bool:
        return self._v[1] == libmp.fzero

    def _binary(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.prec, other.prec)
        return FloatScalar(op(self._v, other._v, prec, _RND), prec)

    def __add__(self, other):
        return self._binary(other, libmp.mpc_add)

    def __sub__(self, other):
        return self._binary(other, libmp.mpc_sub)

    def __mul__(self, other):
        return self._binary(other, libmp.mpc_mul)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("floating scalar division by zero")
        return self._binary(other, libmp.mpc_div)

    def __neg__(self):
        return FloatScalar(libmp.mpc_neg(self._v), self.prec)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return bigfloat(1, self.prec) / self ** (-n)
        return FloatScalar(libmp.mpc_pow_int(self._v, n, self.prec, _RND), self.prec)

    def conjugate(self):
        return FloatScalar(libmp.mpc_conjugate(self._v, self.prec), self.prec)

    def magnitude(self) -> float:
        return libmp.to_float(libmp.mpc_abs(self._v, self.prec))

    def cmp_abs(self, bound) -> int:
        bound = Fraction(bound)
        target = libmp.from_rational(bound.numerator, bound.denominator, self.prec + 10, _RND)
        return libmp.mpf_cmp(libmp.mpc_abs(self._v, self.prec + 10), target)

    def real_sign(self) -> int:
        return libmp.mpf_sign(self._v[0])

    def to_complex(self) -> complex:
        return complex(libmp.to_float(self._v[0]), libmp.to_float(self._v[1]))

    def __eq__(self, other):
        if isinstance(other, FloatScalar):
            return self._v == other._v
        if isinstance(other, (int, Fraction, float, complex)):
            return self._v == bigfloat(other, self.prec)._v
        return NotImplemented

    def __hash__(self):
        return hash(self._v)

    def __str__(self):
        dps = libmp.repr_dps(self.prec)
        re_s = libmp.to_str(self._v[0], dps)
        if self.is_real:
            return re_s
        im_s = libmp.to_str(self._v[1], dps)
        return f"{re_s}{'' if im_s.startswith('-') else '+'}{im_s}j"

    def __repr__(self):
        return f"FloatScalar({self}, prec={self.prec})"


_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def _split_complex(text: str) -> tuple[str, str]:
    body = text.strip()[:-1]
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            return body[:pos], body[pos:]
    return "0", body


def exact(value) -> ExactScalar:
    """Build an exact scalar from an int, Fraction, ``"p/q"`` string or exact scalar."""
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactScalar(value)
    if isinstance(value, str):
        text = value.strip()
        if text.endswith(("j", "i")):
            re_s, im_s = _split_complex(text)
            im_s = im_s.strip()
            im_s = im_s + "1" if im_s in ("+", "-", "") else im_s
            return ExactScalar(Fraction(re_s), Fraction(im_s))
        if not _RATIONAL_RE.match(text):
            raise ModeError(f"{value!r} is not an exact rational literal")
        return ExactScalar(Fraction(text))
    if isinstance(value, FloatScalar):
        raise ModeMismatchError("refusing to convert a floating scalar to exact mode")
    if isinstance(value, (float, complex)):
        raise ModeError("python floats are not exact; pass a Fraction or 'p/q' string")
    raise TypeError(f"cannot build an exact scalar from {type(value).__name__}")


def _mpf(value, prec):
    if isinstance(value, int):
        return libmp.from_int(value, prec, _RND)
    if isinstance(value, Fraction):
        return libmp.from_rational(value.numerator, value.denominator, prec, _RND)
    if isinstance(value, float):
        return libmp.from_float(value, prec, _RND)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            return _mpf(Fraction(text), prec)
        return libmp.from_str(text, prec, _RND)
    raise TypeError(f"cannot build a float from {type(value).__name__}")


def bigfloat(value, prec: int = DEFAULT_PRECISION) -> FloatScalar:
    """Build a floating scalar at ``prec`` bits.

    Exact scalars are converted explicitly (rounding once); this is the only
    sanctioned way to move a value from exact into floating mode.
    """
    if prec < MIN_PRECISION:
        raise ModeError(f"precision must be at least {MIN_PRECISION} bits, got {prec}")
    if isinstance(value, FloatScalar):
        if value.prec == prec:
            return value
        return FloatScalar(libmp.mpc_pos(value._v, prec, _RND), prec)
    if isinstance(value, ExactScalar):
        return FloatScalar((_mpf(value.re, prec), _mpf(value.im, prec)), prec)
    if isinstance(value, complex):
        return FloatScalar((_mpf(value.real, prec), _mpf(value.imag, prec)), prec)
    if isinstance(value, str) and value.strip().endswith(("j", "i")):
        re_s, im_s = _split_complex(value)
        im_s = im_s.strip()
        im_s = im_s + "1" if im_s in ("+", "-", "") else im_s
        return FloatScalar((_mpf(re_s, prec), _mpf(im_s, prec)), prec)
    return FloatScalar((_mpf(value, prec), libmp.fzero), prec)


def parse_scalar(text: str, mode: Mode | str = Mode.EXACT, prec: int = DEFAULT_PRECISION) -> Scalar:
    """Inverse of ``str(scalar)`` for either mode."""
    if Mode(mode) is Mode.EXACT:
        return exact(text)
    return bigfloat(text, prec)


def as_scalar(value, like: Scalar | None = None) -> Scalar:
    """Coerce ``value`` into the mode of ``like``, or infer a mode when ``like`` is None."""
    if like is not None:
        if isinstance(value, Scalar) and value.mode is not like.mode:
            raise ModeMismatchError("cannot combine exact and floating scalars")
        return like.lift(value)
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (float, complex)):
        return bigfloat(value, MIN_PRECISION)
    return exact(value)


def unify(*values) -> list[Scalar]:
    """Coerce all values into one common mode, rejecting exact/float mixtures.

    Floating inputs are brought to the largest precision present.
    """
    scalars = [v for v in values if isinstance(v, Scalar)]
    modes = {s.mode for s in scalars}
    if len(modes) > 1:
        raise ModeMismatchError("cannot combine exact and floating scalars")
    if not scalars:
        return [as_scalar(v) for v in values]
    if modes == {Mode.FLOAT}:
        prec = max(s.prec for s in scalars)
        return [bigfloat(v, prec) for v in values]
    return [exact(v) for v in values]


def root_of_unity(n: int, j: int, like: Scalar) -> Scalar:
    """``exp(2*pi*i*j/n)`` in the mode of ``like``.

    Exact mode only supports the Gaussian-rational cases ``n`` in {1, 2, 4}.
    """
    j %= n
    if isinstance(like, ExactScalar):
        if 4 % n:
            raise ModeError(f"primitive {n}-th roots of unity are not exact complex rationals")
        return ExactScalar(*[(1, 0), (0, 1), (-1, 0), (0, -1)][(4 // n) * j])
    prec = like.prec + 10
    angle = libmp.mpf_div(
        libmp.mpf_mul(libmp.mpf_pi(prec), libmp.from_int(2 * j), prec), libmp.from_int(n), prec
    )
    c, s = libmp.mpf_cos_sin(angle, prec)
    return FloatScalar(libmp.mpc_pos((c, s), like.prec, _RND), like.prec)


def _integer_root(k: int, n: int) -> int:
    """Floor of the real ``n``-th root of ``k >= 0`` (Newton iteration on integers)."""
    if k < 2:
        return k
    x = 1 << -(-k.bit_length() // n)
    while True:
        y = ((n - 1) * x + k // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def _exact_nth_root(value: Fraction, n: int) -> Fraction | None:
    num, den = abs(value.numerator), value.denominator
    rn, rd = _integer_root(num, n), _integer_root(den, n)
    if rn**n != num or rd**n != den:
        return None
    return Fraction(rn, rd)


def nth_roots(x: Scalar, n: int) -> list[Scalar]:
    """All ``n`` solutions of ``y**n == x``, ordered by root-of-unity index.

    In exact mode this succeeds only when the roots are Gaussian rationals.
    """
    if n < 1:
        raise ModeError("root order must be positive")
    if n == 1:
        return [x]
    if x.is_zero():
        return [x] * n
    if isinstance(x, ExactScalar):
        if x.im:
            raise ModeError(f"exact {n}-th roots of non-real {x} are not supported")
        r = _exact_nth_root(x.re, n)
        if r is None:
            raise ModeError(f"{x} has no rational {n}-th root; use float mode")
        if x.re > 0:
            base = ExactScalar(r)
        elif n % 2:
            base = ExactScalar(-r)
        elif n == 2:
            base = ExactScalar(0, r)
        else:
            raise ModeError(f"{n}-th roots of negative {x} are not exact complex rationals")
        roots = [base * root_of_unity(n, j, x) for j in range(n)]
    else:
        base = FloatScalar(libmp.mpc_nthroot(x._v, n, x.prec + 10, _RND), x.prec + 10)
        roots = [
            bigfloat(base * bigfloat(root_of_unity(n, j, base), base.prec), x.prec) for j in range(n)
        ]
    return roots
