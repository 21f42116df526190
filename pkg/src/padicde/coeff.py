"""Exact coefficient fields with a normalized p-adic valuation.

Two kinds are supported: the rationals, whose elements are plain
``Fraction`` values, and a simple extension ``Q[x]/(f)`` where ``f`` is
Eisenstein at p or the p-th cyclotomic polynomial.  Both kinds of f stay
irreducible over Q_p and are totally ramified there, so the valuation
extends uniquely and can be read off the norm:

    v(a) = v_p(N(a)) / deg f,    N(a) = Res(f, a).

Valuations are normalized with v(p) = 1 and live in
``Fraction ∪ {INF}`` (see :mod:`padicde.extended`).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from . import polyalg
from .errors import FieldMismatchError, NotInvertibleError, ParseError, PreconditionError
from .extended import INF, as_rational, format_rational


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(x, p: int):
    """p-adic valuation of a rational, INF at zero."""
    if not x:
        return INF
    x = Fraction(x)
    return Fraction(vp_int(x.numerator, p) - vp_int(x.denominator, p))


def round_rational(x, p: int, m: int) -> Fraction:
    """A rational of small height congruent to x modulo p^m (so v(x - x') >= m)."""
    x = Fraction(x)
    if not x:
        return x
    v = vp_int(x.numerator, p) - vp_int(x.denominator, p)
    if v >= m:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    if v > 0:
        num //= p ** v
    elif v < 0:
        den //= p ** (-v)
    mod = p ** (m - v)
    u = num * pow(den, -1, mod) % mod
    if u > mod // 2:
        u -= mod
    return Fraction(u) * Fraction(p) ** v


def cyclotomic_coeffs(p: int):
    return (Fraction(1),) * p


def _is_eisenstein(f, p: int) -> bool:
    *lower, lead = f
    if lead != 1:
        return False
    for c in lower:
        if c.denominator % p == 0 or c.numerator % p:
            return False
    return vp_rational(lower[0], p) == 1


class CoeffField:
    """The rationals, or Q[x]/(minpoly), together with a prime p.

    ``minpoly`` is given in ascending order and must be monic.  The
    Frobenius descriptor is either ``None`` (identity) or the image of the
    generator as a coefficient list; it must define a field automorphism.
    """

    __slots__ = ("p", "minpoly", "degree", "e", "frob_image", "_zero", "_one", "_gen")

    def __init__(self, p: int, minpoly=None, frobenius=None):
        if not isinstance(p, int) or not is_prime(p):
            raise PreconditionError(f"p must be prime, got {p!r}")
        self.p = p
        if minpoly is None:
            self.minpoly = None
            self.degree = 1
            self.e = 1
        else:
            f = tuple(Fraction(as_rational(c)) for c in minpoly)
            while f and f[-1] == 0:
                f = f[:-1]
            if len(f) < 2:
                raise PreconditionError("minimal polynomial must have degree >= 1")
            if f[-1] != 1:
                raise PreconditionError("minimal polynomial must be monic")
            if not (_is_eisenstein(f, p) or f == cyclotomic_coeffs(p)):
                raise PreconditionError(
                    "minimal polynomial must be Eisenstein at p or the p-th cyclotomic polynomial")
            self.minpoly = f
            self.degree = len(f) - 1
            self.e = self.degree
        self._zero = self._one = self._gen = None
        self.frob_image = None
        if frobenius is not None and frobenius != "identity":
            if self.minpoly is None:
                raise PreconditionError("the rationals only carry the identity Frobenius")
            image = self._reduce([Fraction(as_rational(c)) for c in frobenius])
            if image != tuple(self.gen.coeffs):
                g = FieldElem(self, image)
                if polyalg.evaluate([self(c) for c in self.minpoly], g) != self.zero:
                    raise PreconditionError("Frobenius image of the generator is not a root")
                self.frob_image = image

    # -- construction helpers -------------------------------------------------
    @classmethod
    def rationals(cls, p: int) -> "CoeffField":
        return cls(p)

    @classmethod
    def cyclotomic(cls, p: int) -> "CoeffField":
        return cls(p, cyclotomic_coeffs(p))

    @classmethod
    def pi_adjoined(cls, p: int) -> "CoeffField":
        """Q[π]/(π^(p-1) + p); for p = 2 this is just Q with π = -2."""
        if p == 2:
            return cls(p)
        return cls(p, [p] + [0] * (p - 2) + [1])

    @property
    def kind(self) -> str:
        return "Q" if self.minpoly is None else "ext"

    def __eq__(self, other):
        return (isinstance(other, CoeffField) and self.p == other.p
                and self.minpoly == other.minpoly and self.frob_image == other.frob_image)

    def __hash__(self):
        return hash((self.p, self.minpoly, self.frob_image))

    def __repr__(self):
        if self.minpoly is None:
            return f"CoeffField(p={self.p}, Q)"
        return f"CoeffField(p={self.p}, minpoly={[format_rational(c) for c in self.minpoly]})"

    # -- elements -------------------------------------------------------------
    def _reduce(self, coeffs):
        _, r = polyalg.divmod_poly(list(coeffs), list(self.minpoly))
        r = list(r) + [Fraction(0)] * (self.degree - len(r))
        return tuple(r)

    def __call__(self, x):
        """Coerce an int, Fraction, "num/den" string, list or element."""
        if self.minpoly is None:
            if isinstance(x, FieldElem):
                raise FieldMismatchError("extension element given to the rationals")
            if isinstance(x, (list, tuple)):
                if len(x) != 1:
                    raise ParseError("rational field elements have one coefficient")
                x = x[0]
            try:
                return Fraction(as_rational(x))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad rational {x!r}") from exc
        if isinstance(x, FieldElem):
            if x.field != self:
                raise FieldMismatchError("element belongs to a different field")
            return x
        if isinstance(x, (list, tuple)):
            try:
                coeffs = [Fraction(as_rational(c)) for c in x]
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coefficient list {x!r}") from exc
            return FieldElem(self, self._reduce(coeffs))
        try:
            c = Fraction(as_rational(x))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad field element {x!r}") from exc
        return FieldElem(self, (c,) + (Fraction(0),) * (self.degree - 1))

    @property
    def zero(self):
        if self._zero is None:
            self._zero = self(0)
        return self._zero

    @property
    def one(self):
        if self._one is None:
            self._one = self(1)
        return self._one

    @property
    def gen(self):
        if self.minpoly is None:
            raise PreconditionError("the rationals have no generator")
        if self._gen is None:
            self._gen = self([0, 1])
        return self._gen

    def contains(self, x) -> bool:
        if self.minpoly is None:
            return isinstance(x, (int, Fraction)) and not isinstance(x, bool)
        return isinstance(x, FieldElem) and x.field == self

    # -- valuation ------------------------------------------------------------
    def valuation(self, x):
        if self.minpoly is None:
            return vp_rational(x, self.p)
        x = self(x)
        return _ext_valuation(self.minpoly, x.coeffs, self.p)

    def round(self, x, m: int):
        """An element x' with v(x - x') >= m and small coordinates.

        Coordinates are rounded one by one; the generator has v >= 0 for
        both kinds of extension, so the error bound carries over.
        """
        if self.minpoly is None:
            return round_rational(x, self.p, m)
        x = self(x)
        return FieldElem(self, tuple(round_rational(a, self.p, m) for a in x.coeffs))

    def norm(self, x) -> Fraction:
        """Field norm down to Q, as Res(minpoly, representative)."""
        if self.minpoly is None:
            return Fraction(x)
        x = self(x)
        return _norm(self.minpoly, x.coeffs)

    # -- distinguished elements ---------------------------------------------
    def pi(self):
        """An element with π^(p-1) = -p, when the field has one we can name."""
        p = self.p
        if p == 2:
            return self(-2)
        if self.minpoly is not None:
            g = self.gen
            if g ** (p - 1) == self(-p):
                return g
            if self.minpoly == cyclotomic_coeffs(p) and p == 3:
                return 1 + 2 * g
        raise PreconditionError(f"field {self!r} has no known π with π^(p-1) = -p")

    def zeta(self):
        """A primitive p-th root of unity."""
        p = self.p
        if p == 2:
            return self(-1)
        if self.minpoly == cyclotomic_coeffs(p):
            return self.gen
        if p == 3 and self.minpoly is not None:
            pi = self.pi()
            return (pi - 1) / 2
        raise PreconditionError(f"field {self!r} does not contain a primitive {p}-th root of unity")

    def frobenius(self, x):
        if self.frob_image is None:
            return x
        x = self(x)
        image = FieldElem(self, self.frob_image)
        return polyalg.evaluate(list(x.coeffs), image) if any(x.coeffs) else x

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        out = {"p": self.p, "kind": self.kind}
        if self.minpoly is not None:
            out["minpoly"] = [format_rational(c) for c in self.minpoly]
            if self.frob_image is not None:
                out["frobenius"] = [format_rational(c) for c in self.frob_image]
        return out

    @classmethod
    def from_json(cls, data) -> "CoeffField":
        if not isinstance(data, dict) or "p" not in data:
            raise ParseError("field descriptor must be an object with a prime 'p'")
        kind = data.get("kind", "Q")
        p = data["p"]
        if not isinstance(p, int) or isinstance(p, bool):
            raise ParseError("'p' must be an integer")
        if kind == "Q":
            return cls(p)
        if kind != "ext":
            raise ParseError(f"unknown field kind {kind!r}")
        if "minpoly" not in data:
            raise ParseError("extension descriptor needs 'minpoly'")
        try:
            minpoly = [as_rational(c) for c in data["minpoly"]]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError("bad minimal polynomial") from exc
        return cls(p, minpoly, data.get("frobenius"))

    def elem_to_json(self, x):
        if self.minpoly is None:
            return format_rational(x)
        return [format_rational(c) for c in self(x).coeffs]

    def elem_from_json(self, data):
        return self(data)


@lru_cache(maxsize=65536)
def _norm(minpoly, coeffs) -> Fraction:
    a = polyalg.trim(list(coeffs))
    if not a:
        return Fraction(0)
    return Fraction(polyalg.resultant(list(minpoly), a))


@lru_cache(maxsize=65536)
def _ext_valuation(minpoly, coeffs, p):
    n = _norm(minpoly, coeffs)
    if not n:
        return INF
    return vp_rational(n, p) / (len(minpoly) - 1)


class FieldElem:
    """An element of a simple extension, stored as reduced coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CoeffField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatchError("elements of different fields")
            return other
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return FieldElem(self.field, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = polyalg.mul(list(self.coeffs), list(o.coeffs))
        return FieldElem(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self):
        a = polyalg.trim(list(self.coeffs))
        if not a:
            raise NotInvertibleError("division by zero in a field")
        g, u, _ = polyalg.xgcd(a, list(self.field.minpoly))
        # minpoly is irreducible, so g = 1
        return FieldElem(self.field, self.field._reduce(u))

    def __truediv__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            if not other:
                raise NotInvertibleError("division by zero in a field")
            return FieldElem(self.field, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(format_rational(c) + ("" if i == 0 else f"*x^{i}"))
        return "(" + (" + ".join(terms) or "0") + ")"

    def valuation(self):
        return self.field.valuation(self)


def field_arith(x, y, op: str, field: CoeffField | None = None):
    """Apply ``op`` in {add, sub, mul, div} to two elements of one field."""
    if field is not None:
        x, y = field(x), field(y)
    elif isinstance(x, FieldElem) != isinstance(y, FieldElem):
        if isinstance(x, FieldElem):
            y = x.field(y)
        else:
            x = y.field(x)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if not y:
            raise NotInvertibleError("division by zero")
        return x / y
    raise PreconditionError(f"unknown field operation {op!r}")
