"""Exact rationals extended by signed infinities.

Valuations and Gauss-norm exponents live in Q ∪ {+∞}; truncation windows
additionally need −∞.  Finite values stay plain :class:`fractions.Fraction`
(or ``int``), and the two infinities are singletons that compare and add
correctly against them.  Nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class _Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "INF" if self.sign > 0 else "-INF"

    def __str__(self):
        return "+inf" if self.sign > 0 else "-inf"

    def __hash__(self):
        return hash(("extended-infinity", self.sign))

    def __eq__(self, other):
        return self is other

    def __lt__(self, other):
        if isinstance(other, _Infinity):
            return self.sign < other.sign
        if isinstance(other, Rational):
            return self.sign < 0
        return NotImplemented

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return self.sign > other.sign
        if isinstance(other, Rational):
            return self.sign > 0
        return NotImplemented

    def __ge__(self, other):
        return self == other or self > other

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __add__(self, other):
        if isinstance(other, _Infinity):
            if other.sign != self.sign:
                raise ArithmeticError("inf - inf is undefined")
            return self
        if isinstance(other, Rational):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _Infinity):
            return INF if self.sign == other.sign else NEG_INF
        if isinstance(other, Rational):
            if other > 0:
                return self
            if other < 0:
                return -self
            raise ArithmeticError("0 * inf is undefined")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational) and other != 0:
            return self if other > 0 else -self
        raise ArithmeticError("undefined division of an infinity")

    def __reduce__(self):
        return (_infinity, (self.sign,))


def _infinity(sign):
    return INF if sign > 0 else NEG_INF


INF = _Infinity(1)
NEG_INF = _Infinity(-1)


def is_finite(x) -> bool:
    return not isinstance(x, _Infinity)


def as_rational(x):
    """Coerce ints, Fractions and "num/den" strings; pass infinities through."""
    if isinstance(x, _Infinity):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        text = x.strip()
        if text in ("inf", "+inf"):
            return INF
        if text == "-inf":
            return NEG_INF
        return Fraction(text)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(x) -> str:
    """Render as "num/den" (integers without a denominator), or "+inf"/"-inf"."""
    if isinstance(x, _Infinity):
        return str(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
