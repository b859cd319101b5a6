"""Exact rationals extended with two signed infinities.

Finite values are plain :class:`fractions.Fraction` objects.  The two
infinities are singletons that order correctly against every Fraction and
support the handful of operations the solver needs (negation, addition of a
finite value, scaling by a non-zero rational).  Anything that would produce
``inf - inf`` or ``0 * inf`` raises :class:`UndefinedInfinity`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union


class UndefinedInfinity(ArithmeticError):
    """An operation on infinities has no defined value (e.g. inf - inf)."""


class _Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    # ordering ----------------------------------------------------------
    def _key(self, other):
        if isinstance(other, _Infinity):
            return other.sign
        if isinstance(other, (_RationalABC, int)):
            return 0
        return NotImplemented

    def __eq__(self, other):
        k = self._key(other)
        return NotImplemented if k is NotImplemented else self.sign == k and isinstance(other, _Infinity)

    def __hash__(self):
        return hash(("inf", self.sign))

    def __lt__(self, other):
        k = self._key(other)
        return NotImplemented if k is NotImplemented else self.sign < k

    def __le__(self, other):
        k = self._key(other)
        return NotImplemented if k is NotImplemented else self.sign <= k

    def __gt__(self, other):
        k = self._key(other)
        return NotImplemented if k is NotImplemented else self.sign > k

    def __ge__(self, other):
        k = self._key(other)
        return NotImplemented if k is NotImplemented else self.sign >= k

    # arithmetic --------------------------------------------------------
    def __neg__(self):
        return NEG_INF if self.sign > 0 else POS_INF

    def __add__(self, other):
        if isinstance(other, _Infinity):
            if other.sign != self.sign:
                raise UndefinedInfinity("inf - inf")
            return self
        if isinstance(other, (_RationalABC, int)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (_Infinity, _RationalABC, int)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (_RationalABC, int)):
            return -self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (_RationalABC, int)):
            if other == 0:
                raise UndefinedInfinity("0 * inf")
            return self if other > 0 else -self
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (_RationalABC, int)):
            if other == 0:
                raise ZeroDivisionError("inf / 0")
            return self if other > 0 else -self
        return NotImplemented

    def __repr__(self):
        return "inf" if self.sign > 0 else "-inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_infinity, (self.sign,))


def _infinity(sign: int) -> "_Infinity":
    return POS_INF if sign > 0 else NEG_INF


POS_INF = _Infinity(1)
NEG_INF = _Infinity(-1)

ExtRational = Union[Fraction, _Infinity]

_RATIONAL_RE = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?\s*$")


def is_finite(x) -> bool:
    return not isinstance(x, _Infinity)


def to_rational(value) -> Fraction:
    """Parse ``value`` into an exact Fraction.

    Accepts ints, Fractions and strings such as ``"3"``, ``"-2/5"`` or
    ``"0.25"``.  Floats are rejected because they are almost never what the
    caller meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def to_ext(value) -> ExtRational:
    """Like :func:`to_rational` but also accepts ``"inf"``/``"-inf"``."""
    if isinstance(value, _Infinity):
        return value
    if isinstance(value, str):
        s = value.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return POS_INF
        if s in ("-inf", "-infinity"):
            return NEG_INF
    return to_rational(value)


def fmt(x: ExtRational) -> str:
    """Canonical string: ``"a"`` or ``"a/b"`` for finite values, ``"inf"``/``"-inf"``."""
    if isinstance(x, _Infinity):
        return str(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def ext_max(*values: ExtRational) -> ExtRational:
    return max(values)


def ext_min(*values: ExtRational) -> ExtRational:
    return min(values)
