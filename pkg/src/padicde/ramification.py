"""Ramification bookkeeping: Herbrand functions, breaks, Hasse-Arf polygons.

Galois groups never appear.  An extension is carried by the orders of its
lower ramification groups, or directly by its Herbrand function φ, a
concave increasing piecewise-linear map with φ(0) = 0.  Everything is exact.

Lower numbering follows Serre: for real u ≥ 0, G_u = G_⌈u⌉, so the slope of
φ on (i-1, i] is |G_i|/|G_0|.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import ParseError, PreconditionError
from .extended import INF, as_rational, format_rational


def _q(x) -> Fraction:
    try:
        v = as_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {x!r}") from exc
    if v is INF or not isinstance(v, Fraction):
        raise PreconditionError(f"expected a finite rational, got {x!r}")
    return v


class PiecewiseLinear:
    """Continuous piecewise-linear map on [0, ∞) through the given vertices.

    Beyond the last vertex the map continues with ``final_slope``.
    Collinear vertices are merged, so two functions are equal exactly when
    their normalized vertex lists and final slopes agree.
    """

    __slots__ = ("vertices", "final_slope")

    def __init__(self, vertices, final_slope):
        pts = [(_q(u), _q(y)) for u, y in vertices]
        if not pts or pts[0][0] != 0:
            raise PreconditionError("the first vertex must sit at u = 0")
        for (u0, _), (u1, _) in zip(pts, pts[1:]):
            if not u1 > u0:
                raise PreconditionError("vertex abscissae must increase strictly")
        self.final_slope = _q(final_slope)
        self.vertices = tuple(_merge_collinear(pts, self.final_slope))

    def slopes(self):
        """Slopes of the successive pieces, ending with the final slope."""
        out = []
        for (u0, y0), (u1, y1) in zip(self.vertices, self.vertices[1:]):
            out.append((y1 - y0) / (u1 - u0))
        out.append(self.final_slope)
        return out

    def __call__(self, u):
        u = _q(u)
        if u < 0:
            raise PreconditionError("Herbrand functions are evaluated on u >= 0")
        us = [v[0] for v in self.vertices]
        i = bisect.bisect_right(us, u) - 1
        u0, y0 = self.vertices[i]
        if i + 1 < len(self.vertices):
            u1, y1 = self.vertices[i + 1]
            return y0 + (y1 - y0) * (u - u0) / (u1 - u0)
        return y0 + self.final_slope * (u - u0)

    def inverse(self) -> "PiecewiseLinear":
        if any(not m > 0 for m in self.slopes()):
            raise PreconditionError("only strictly increasing maps are invertible")
        return PiecewiseLinear([(y, u) for u, y in self.vertices], 1 / self.final_slope)

    def solve(self, y):
        """The u with self(u) = y, for increasing maps."""
        return self.inverse()(y)

    def is_concave(self) -> bool:
        s = self.slopes()
        return all(a > b for a, b in zip(s, s[1:]))

    def is_convex(self) -> bool:
        s = self.slopes()
        return all(a < b for a, b in zip(s, s[1:]))

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        return self.vertices == other.vertices and self.final_slope == other.final_slope

    def __hash__(self):
        return hash((self.vertices, self.final_slope))

    def __repr__(self):
        pts = ", ".join(f"({format_rational(u)}, {format_rational(y)})" for u, y in self.vertices)
        return f"{type(self).__name__}([{pts}], final_slope={format_rational(self.final_slope)})"

    def to_json(self) -> dict:
        return {"vertices": [[format_rational(u), format_rational(y)] for u, y in self.vertices],
                "final_slope": format_rational(self.final_slope)}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "vertices" not in data or "final_slope" not in data:
            raise ParseError("piecewise-linear function needs 'vertices' and 'final_slope'")
        try:
            return cls([tuple(v) for v in data["vertices"]], data["final_slope"])
        except (TypeError, ValueError) as exc:
            raise ParseError("bad vertex list") from exc


def _merge_collinear(pts, final_slope):
    slopes = [(y1 - y0) / (u1 - u0) for (u0, y0), (u1, y1) in zip(pts, pts[1:])]
    slopes.append(final_slope)
    kept = [pts[0]]
    for i in range(1, len(pts)):
        if slopes[i - 1] != slopes[i]:
            kept.append(pts[i])
    return kept


class HerbrandFn(PiecewiseLinear):
    """φ: concave, strictly increasing, φ(0) = 0."""

    __slots__ = ()

    def __init__(self, vertices, final_slope):
        super().__init__(vertices, final_slope)
        if self.vertices[0] != (0, 0):
            raise PreconditionError("a Herbrand function satisfies φ(0) = 0")
        slopes = self.slopes()
        if any(not m > 0 for m in slopes):
            raise PreconditionError("a Herbrand function is strictly increasing")
        if not self.is_concave():
            raise PreconditionError("a Herbrand function is concave")

    @classmethod
    def identity(cls) -> "HerbrandFn":
        return cls([(0, 0)], 1)


def phi_from_lower(orders) -> HerbrandFn:
    """φ from the orders [|G_0|, |G_1|, ...] of the lower filtration."""
    orders = list(orders)
    if not orders:
        raise PreconditionError("the filtration needs at least |G_0|")
    for g in orders:
        if not isinstance(g, int) or isinstance(g, bool) or g < 1:
            raise PreconditionError(f"group orders are positive integers, got {g!r}")
    for a, b in zip(orders, orders[1:]):
        if b > a or a % b:
            raise PreconditionError("each group order must divide the previous one")
    if orders[-1] != 1:
        raise PreconditionError("the filtration must terminate at the trivial group")
    g0 = orders[0]
    vertices = [(0, Fraction(0))]
    y = Fraction(0)
    for i in range(1, len(orders)):
        y += Fraction(orders[i], g0)
        vertices.append((i, y))
    return HerbrandFn(vertices, Fraction(1, g0))


def artin_schreier_phi(d: int, p: int) -> HerbrandFn:
    """φ(m) = m up to the break d, then d + (m - d)/p."""
    if not isinstance(d, int) or d < 1:
        raise PreconditionError("the degree d must be a positive integer")
    if d % p == 0:
        raise PreconditionError(f"the degree {d} must be prime to p = {p}")
    return HerbrandFn([(0, 0), (d, d)], Fraction(1, p))


def psi(f: PiecewiseLinear) -> PiecewiseLinear:
    """The inverse function ψ (convex when f is a Herbrand function)."""
    return f.inverse()


def compose(outer: PiecewiseLinear, inner: PiecewiseLinear) -> PiecewiseLinear:
    """outer ∘ inner, exactly.  The inner map must be increasing."""
    cuts = {u for u, _ in inner.vertices}
    for u, _ in outer.vertices:
        cuts.add(inner.solve(u))
    cuts = sorted(cuts)
    vertices = [(u, outer(inner(u))) for u in cuts]
    return PiecewiseLinear(vertices, outer.final_slope * inner.final_slope)


def compose_phi(outer: PiecewiseLinear, inner: PiecewiseLinear) -> HerbrandFn:
    """Transitivity of φ in a tower; the result is checked to be a φ again."""
    g = compose(outer, inner)
    return HerbrandFn(g.vertices, g.final_slope)


def phi_non_galois(phi_top_over_base: HerbrandFn, phi_top_over_mid: HerbrandFn) -> HerbrandFn:
    """φ_{E/F} = φ_{E'/F} ∘ ψ_{E'/E} for E ⊂ E' with E'/F Galois."""
    return compose_phi(phi_top_over_base, psi(phi_top_over_mid))


def highest_break_combine(b1, b2) -> Fraction:
    """Highest break of a compositum, direct sum or tensor product."""
    b1, b2 = _q(b1), _q(b2)
    if b1 < 0 or b2 < 0:
        raise PreconditionError("breaks are nonnegative")
    return max(b1, b2)


@dataclass(frozen=True)
class BreakData:
    """A multiset of breaks, stored as sorted (break, multiplicity) pairs."""

    entries: tuple

    def __init__(self, entries=()):
        merged = {}
        for b, m in entries:
            b = _q(b)
            if b < 0:
                raise PreconditionError("breaks are nonnegative")
            if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                raise PreconditionError("multiplicities are positive integers")
            merged[b] = merged.get(b, 0) + m
        object.__setattr__(self, "entries", tuple(sorted(merged.items())))

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.entries)

    def highest(self):
        return self.entries[-1][0] if self.entries else Fraction(0)

    def to_json(self):
        return [[format_rational(b), m] for b, m in self.entries]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list):
            raise ParseError("break data is a list of [break, multiplicity] pairs")
        try:
            return cls((b, m) for b, m in data)
        except (TypeError, ValueError) as exc:
            raise ParseError("bad break data") from exc


@dataclass(frozen=True)
class HasseArfPolygon:
    vertices: tuple
    integral: bool

    def to_json(self):
        return {"vertices": [[x, format_rational(y)] for x, y in self.vertices],
                "integral": self.integral}


def hasse_arf_polygon(b: BreakData) -> HasseArfPolygon:
    """Unit-width segments whose slopes are the breaks in increasing order."""
    vertices = [(0, Fraction(0))]
    y = Fraction(0)
    x = 0
    for brk, mult in b.entries:
        for _ in range(mult):
            x += 1
            y += brk
            vertices.append((x, y))
    integral = all(v.denominator == 1 for _, v in vertices)
    return HasseArfPolygon(tuple(vertices), integral)


def closed_form_bound(kind: str, **params):
    """Closed-form bounds on image orders and breaks.

    * ``abelian-image`` (p, n, ell): p^(n·⌊ell⌋), the order bound for an
      abelian image with breaks at most ell (breaks of such images are
      integers, so only ⌊ell⌋ counts).
    * ``frobenius-order`` (q, d): (q^(d!) - 1)^d.
    * ``frob-break`` (p, s_eps): 1/((p - 1)·s_eps) where s_eps = -log_p ε.
    * ``full-image`` (p, n, ell_prime, jordan): jordan·p^(n·⌊ell_prime⌋);
      the caller supplies the Jordan constant and the transformed break
      bound of the abelian subgroup.
    """
    try:
        if kind == "abelian-image":
            p, n, ell = params["p"], params["n"], _q(params["ell"])
            _check_pos_int(p, n)
            if ell < 0:
                raise PreconditionError("ell must be nonnegative")
            return Fraction(p) ** (n * (ell.numerator // ell.denominator))
        if kind == "frobenius-order":
            q, d = params["q"], params["d"]
            _check_pos_int(q, d)
            return Fraction((q ** factorial(d) - 1) ** d)
        if kind == "frob-break":
            p, s_eps = params["p"], _q(params["s_eps"])
            _check_pos_int(p)
            if s_eps <= 0:
                raise PreconditionError("s_eps = -log_p(ε) must be positive")
            return 1 / ((p - 1) * s_eps)
        if kind == "full-image":
            jordan = params.get("jordan")
            if jordan is None:
                raise PreconditionError("full-image needs a caller-supplied Jordan constant")
            jordan = _q(jordan)
            if jordan <= 0:
                raise PreconditionError("the Jordan constant must be positive")
            base = closed_form_bound("abelian-image", p=params["p"], n=params["n"],
                                     ell=params["ell_prime"])
            return jordan * base
    except KeyError as exc:
        raise PreconditionError(f"missing parameter {exc.args[0]!r} for {kind}") from exc
    raise PreconditionError(f"unknown bound kind {kind!r}")


def _check_pos_int(*xs):
    for x in xs:
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise PreconditionError(f"expected a positive integer, got {x!r}")
