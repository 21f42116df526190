"""Truncated Laurent series over a coefficient field, with Gauss norms.

A :class:`LaurentSeries` is a finite dictionary ``{exponent: coefficient}``
plus bookkeeping that says how much of it is known:

* ``lo``/``hi`` bound the *window*, the exponent range on which the stored
  coefficients are the true ones.  An exact series has the full window
  ``(-INF, INF)`` and equals the sum of its stored terms.
* ``tail`` optionally maps log-radii s to certified lower bounds for
  λ_s(true series − stored terms).  Operations that create truncation error
  (inversion, Newton iteration) record it here, and arithmetic propagates it.

Norms are in additive log form: for ρ = p^(-s),

    λ_s(Σ c_i t^i) = min_i (v(c_i) + s·i) = -log_p |x|_ρ.

Stored terms outside the window may appear only on series that carry tail
bounds (their error is then controlled by those bounds); series without
tail bounds are pruned to their window.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeff import CoeffField
from .errors import (FieldMismatchError, HypothesisError, IterationError,
                     NotInvertibleError, ParseError, PreconditionError,
                     UnknownCoefficientError)
from .extended import INF, NEG_INF, as_rational, format_rational, is_finite


@dataclass(frozen=True)
class GaussValue:
    """λ = -log_p of a Gauss norm.

    ``exact`` is False when unknown terms might make the norm larger, i.e.
    the true λ might be smaller than ``lam``.
    """

    lam: object
    exact: bool = True


def _window_min(a, b):
    return a if a <= b else b


def _window_max(a, b):
    return a if a >= b else b


class LaurentSeries:
    __slots__ = ("field", "terms", "lo", "hi", "tail")

    def __init__(self, field: CoeffField, terms=None, lo=NEG_INF, hi=INF, tail=None, *, _trusted=False):
        self.field = field
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for k, c in (terms or {}).items():
                if not isinstance(k, int) or isinstance(k, bool):
                    raise PreconditionError(f"exponent must be an integer, got {k!r}")
                c = field(c)
                if c:
                    clean[k] = c
            self.terms = clean
        self.lo = lo
        self.hi = hi
        self.tail = dict(tail) if tail else {}
        if not self.tail and not self.exact:
            self.terms = {k: c for k, c in self.terms.items() if lo <= k <= hi}

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls(field, {}, _trusted=True)

    @classmethod
    def constant(cls, field, c):
        return cls(field, {0: c})

    @classmethod
    def monomial(cls, field, c, k: int):
        return cls(field, {k: c})

    @classmethod
    def t(cls, field):
        return cls(field, {1: 1})

    # -- basic properties -------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.lo is NEG_INF and self.hi is INF

    @property
    def window(self):
        return (self.lo, self.hi)

    def is_zero(self) -> bool:
        return self.exact and not self.terms

    def coefficient(self, k: int):
        if not (self.lo <= k <= self.hi):
            raise UnknownCoefficientError(f"coefficient of t^{k} lies outside the window")
        return self.terms.get(k, self.field.zero)

    def support(self):
        return sorted(self.terms)

    def min_exponent(self):
        return min(self.terms) if self.terms else INF

    def max_exponent(self):
        return max(self.terms) if self.terms else NEG_INF

    def as_exact(self) -> "LaurentSeries":
        """The stored terms as an exact Laurent polynomial."""
        return LaurentSeries(self.field, dict(self.terms), _trusted=True)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            if self.exact and _is_scalar(other):
                return self == LaurentSeries.constant(self.field, other)
            return NotImplemented
        return (self.field == other.field and self.terms == other.terms
                and self.lo == other.lo and self.hi == other.hi and self.tail == other.tail)

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.terms.items())), self.lo, self.hi))

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"{_fmt_coeff(c)}*t^{k}" for k, c in sorted(self.terms.items()))
        if self.exact:
            return f"LaurentSeries({body})"
        return f"LaurentSeries({body}; window=[{self.lo}, {self.hi}])"

    # -- norms ----------------------------------------------------------------
    def term_valuations(self):
        val = self.field.valuation
        return [(k, val(c)) for k, c in self.terms.items()]

    def stored_lambda(self, s):
        """min over stored terms of v(c_i) + s·i (INF for no terms)."""
        s = Fraction(s)
        val = self.field.valuation
        best = INF
        for k, c in self.terms.items():
            lam = val(c) + s * k
            if lam < best:
                best = lam
        return best

    def tail_bound(self, s):
        """Certified lower bound for λ_s of the unknown part, or None."""
        if self.exact:
            return INF
        s = Fraction(s)
        if s in self.tail:
            return self.tail[s]
        below = [a for a in self.tail if a < s]
        above = [b for b in self.tail if b > s]
        if not below or not above:
            return None
        a, b = max(below), min(above)
        la, lb = self.tail[a], self.tail[b]
        if not (is_finite(la) and is_finite(lb)):
            if is_finite(la) or is_finite(lb):
                return la if is_finite(la) else lb
            return INF
        # λ_s is concave in s, so the chord is a lower bound
        c = (b - s) / (b - a)
        return c * la + (1 - c) * lb

    def gauss_norm(self, s) -> GaussValue:
        lam = self.stored_lambda(s)
        if self.exact:
            return GaussValue(lam, True)
        bound = self.tail_bound(s)
        if bound is not None and lam < bound:
            return GaussValue(lam, True)
        if bound is not None and bound is INF:
            return GaussValue(lam, True)
        return GaussValue(lam, False)

    def certified_lambda(self, s):
        """A guaranteed lower bound for the true λ_s, or None if there is none."""
        lam = self.stored_lambda(s)
        bound = self.tail_bound(s)
        if bound is None:
            return None
        return lam if lam <= bound else bound

    def dominant_term(self, s_lo, s_hi):
        """(exponent, coefficient, margin_lo, margin_hi) if one term dominates.

        The term must attain λ uniquely at both radii, by a positive margin
        that also beats any recorded tail bound.  Returns None otherwise.
        """
        if not self.terms:
            return None
        found = None
        margins = []
        for s in (Fraction(s_lo), Fraction(s_hi)):
            lams = sorted(((lam + s * k, k) for k, lam in self.term_valuations()),
                          key=lambda pair: pair[0])
            best, d = lams[0]
            runner = lams[1][0] if len(lams) > 1 else INF
            bound = self.tail_bound(s)
            if bound is None:
                return None
            runner = runner if runner <= bound else bound
            if not runner > best:
                return None
            if found is not None and found != d:
                return None
            found = d
            margins.append(runner - best)
        return found, self.terms[found], margins[0], margins[1]

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.field != self.field:
                raise FieldMismatchError("series over different fields")
            return other
        if _is_scalar(other):
            return LaurentSeries.constant(self.field, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for k, c in o.terms.items():
            if k in terms:
                v = terms[k] + c
                if v:
                    terms[k] = v
                else:
                    del terms[k]
            else:
                terms[k] = c
        if self.exact and o.exact:
            return LaurentSeries(self.field, terms, _trusted=True)
        lo = _window_max(self.lo, o.lo)
        hi = _window_min(self.hi, o.hi)
        tail = _combine_tails((self, o), lambda bounds, s: min(bounds))
        return LaurentSeries(self.field, terms, lo, hi, tail, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.field, {k: -c for k, c in self.terms.items()},
                             self.lo, self.hi, self.tail, _trusted=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentSeries":
        c = self.field(c)
        if not c:
            if self.exact:
                return LaurentSeries.zero(self.field)
        terms = {}
        for k, a in self.terms.items():
            v = a * c
            if v:
                terms[k] = v
        tail = {}
        if self.tail:
            vc = self.field.valuation(c)
            tail = {s: b + vc for s, b in self.tail.items()}
        return LaurentSeries(self.field, terms, self.lo, self.hi, tail, _trusted=True)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = {}
        for i, a in self.terms.items():
            for j, b in o.terms.items():
                k = i + j
                if k in terms:
                    terms[k] = terms[k] + a * b
                else:
                    terms[k] = a * b
        terms = {k: c for k, c in terms.items() if c}
        if self.exact and o.exact:
            return LaurentSeries(self.field, terms, _trusted=True)
        lo, hi = _product_window(self, o)

        def bound(_, s):
            ta, tb = self.tail_bound(s), o.tail_bound(s)
            la, lb = self.stored_lambda(s), o.stored_lambda(s)
            return min(la + tb, ta + lb, ta + tb)

        tail = _combine_tails((self, o), bound)
        return LaurentSeries(self.field, terms, lo, hi, tail, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PreconditionError("use invert() for negative powers")
        result = LaurentSeries.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        tail = {s: b + s * k for s, b in self.tail.items()}
        return LaurentSeries(self.field, {i + k: c for i, c in self.terms.items()},
                             self.lo + k, self.hi + k, tail, _trusted=True)

    def truncate(self, lo=NEG_INF, hi=INF) -> "LaurentSeries":
        """Forget everything outside [lo, hi] (the result is truncated)."""
        lo = _window_max(self.lo, lo)
        hi = _window_min(self.hi, hi)
        terms = {k: c for k, c in self.terms.items() if lo <= k <= hi}
        return LaurentSeries(self.field, terms, lo, hi, _trusted=True)

    def drop_small(self, s_lo, s_hi, cutoff_lo, cutoff_hi) -> "LaurentSeries":
        """Exact polynomial keeping terms with λ ≤ cutoff at one of the radii."""
        s_lo, s_hi = Fraction(s_lo), Fraction(s_hi)
        terms = {}
        for k, c in self.terms.items():
            v = self.field.valuation(c)
            if v + s_lo * k <= cutoff_lo or v + s_hi * k <= cutoff_hi:
                terms[k] = c
        return LaurentSeries(self.field, terms, _trusted=True)

    def round_to(self, s_lo, s_hi, cutoff_lo, cutoff_hi) -> "LaurentSeries":
        """Exact polynomial within λ > cutoff of self at both radii.

        Like :meth:`drop_small`, and each kept coefficient is also replaced
        by a p-adically close one of small height, which keeps iterated
        exact arithmetic from growing without bound.
        """
        s_lo, s_hi = Fraction(s_lo), Fraction(s_hi)
        terms = {}
        for k, c in self.terms.items():
            need = max(cutoff_lo - s_lo * k, cutoff_hi - s_hi * k)
            if not is_finite(need):
                terms[k] = c
                continue
            m = need.numerator // need.denominator + 1
            r = self.field.round(c, m)
            if r:
                terms[k] = r
        return LaurentSeries(self.field, terms, _trusted=True)

    # -- calculus ---------------------------------------------------------------
    def derivative(self, form: str = "d/dt") -> "LaurentSeries":
        theta = _parse_form(form)
        terms = {}
        for k, c in self.terms.items():
            if k:
                terms[k if theta else k - 1] = c * k
        if self.exact:
            return LaurentSeries(self.field, terms, _trusted=True)
        if theta:
            return LaurentSeries(self.field, terms, self.lo, self.hi, self.tail, _trusted=True)
        # λ_s(i c t^(i-1)) ≥ λ_s(c t^i) - s
        tail = {s: b - s for s, b in self.tail.items()}
        return LaurentSeries(self.field, terms, self.lo - 1, self.hi - 1, tail, _trusted=True)

    def residue(self):
        if not (self.lo <= -1 <= self.hi):
            raise UnknownCoefficientError("the residue lies outside the known window")
        return self.terms.get(-1, self.field.zero)

    def substitute_power(self, n: int) -> "LaurentSeries":
        """t ↦ t^n.  λ_s(result) = λ_(n s)(self)."""
        if not isinstance(n, int) or n < 1:
            raise PreconditionError("substitution exponent must be a positive integer")
        tail = {s / n: b for s, b in self.tail.items()}
        return LaurentSeries(self.field, {k * n: c for k, c in self.terms.items()},
                             self.lo * n if is_finite(self.lo) else self.lo,
                             self.hi * n if is_finite(self.hi) else self.hi,
                             tail, _trusted=True)

    def frobenius_twist(self) -> "LaurentSeries":
        """Σ c_i t^i ↦ Σ σ(c_i) t^(p i), the standard Frobenius lift."""
        p = self.field.p
        frob = self.field.frobenius
        out = self.substitute_power(p)
        if self.field.frob_image is None:
            return out
        return LaurentSeries(self.field, {k: frob(c) for k, c in out.terms.items()},
                             out.lo, out.hi, out.tail, _trusted=True)

    # -- serialization ------------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "coeffs": {str(k): self.field.elem_to_json(c) for k, c in sorted(self.terms.items())},
            "window": [_fmt_bound(self.lo), _fmt_bound(self.hi)],
            "exact": self.exact,
        }
        if self.tail:
            out["tail"] = {format_rational(s): format_rational(b) for s, b in sorted(self.tail.items())}
        return out

    @classmethod
    def from_json(cls, field: CoeffField, data) -> "LaurentSeries":
        if _is_scalar_json(data):
            return cls.constant(field, field(data))
        if not isinstance(data, dict) or "coeffs" not in data:
            raise ParseError("series must be an object with 'coeffs'")
        try:
            terms = {int(k): field(v) for k, v in data["coeffs"].items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise ParseError("bad series coefficients") from exc
        lo, hi = NEG_INF, INF
        if "window" in data:
            try:
                lo, hi = (_parse_bound(b) for b in data["window"])
            except (TypeError, ValueError) as exc:
                raise ParseError("bad series window") from exc
        exact = data.get("exact", lo is NEG_INF and hi is INF)
        if exact and not (lo is NEG_INF and hi is INF):
            raise ParseError("an exact series must have the full window")
        if not exact and lo is NEG_INF and hi is INF:
            raise ParseError("a truncated series needs a finite window bound")
        tail = {}
        for s, b in data.get("tail", {}).items():
            tail[as_rational(s)] = as_rational(b)
        for k in terms:
            if not (lo <= k <= hi) and not tail:
                raise ParseError(f"stored exponent {k} lies outside the window")
        return cls(field, terms, lo, hi, tail, _trusted=True)


def _is_scalar(x) -> bool:
    from numbers import Rational

    from .coeff import FieldElem
    return (isinstance(x, (Rational, FieldElem)) and not isinstance(x, bool))


def _is_scalar_json(x) -> bool:
    return isinstance(x, (str, int, list)) and not isinstance(x, bool)


def _fmt_coeff(c):
    return format_rational(c) if isinstance(c, Fraction) else repr(c)


def _fmt_bound(b):
    return str(b) if not is_finite(b) else b


def _parse_bound(b):
    if isinstance(b, str):
        v = as_rational(b)
        if is_finite(v):
            if v.denominator != 1:
                raise ValueError("window bounds are integers")
            return int(v)
        return v
    if isinstance(b, int) and not isinstance(b, bool):
        return b
    raise ValueError(f"bad window bound {b!r}")


def _parse_form(form: str) -> bool:
    if form in ("d/dt", "d"):
        return False
    if form in ("t d/dt", "t·d/dt", "theta", "t*d/dt"):
        return True
    raise PreconditionError(f"unknown derivation {form!r}")


def _combine_tails(series, rule):
    """Tail bounds at the radii where every inexact operand records one."""
    radii = None
    for x in series:
        if x.exact:
            continue
        keys = set(x.tail)
        radii = keys if radii is None else radii & keys
    if not radii:
        return {}
    out = {}
    for s in radii:
        bounds = [x.tail_bound(s) for x in series]
        out[s] = rule(bounds, s)
    return out


def _product_window(x, y):
    """Exponents at which the product of two truncated series is known."""

    def sup_possible(z):
        return INF if z.hi is not INF else z.max_exponent()

    def inf_possible(z):
        return NEG_INF if z.lo is not NEG_INF else z.min_exponent()

    lo, hi = NEG_INF, INF
    for a, b in ((x, y), (y, x)):
        if a.lo is not NEG_INF:
            sup_b = sup_possible(b)
            if sup_b is not NEG_INF:
                lo = _window_max(lo, a.lo + sup_b)
        if a.hi is not INF:
            inf_b = inf_possible(b)
            if inf_b is not INF:
                hi = _window_min(hi, a.hi + inf_b)
    return lo, hi


# -- module-level operations -------------------------------------------------------

def gauss_norm(x: LaurentSeries, s) -> GaussValue:
    return x.gauss_norm(s)


def derivative(x: LaurentSeries, form: str = "d/dt") -> LaurentSeries:
    return x.derivative(form)


def residue(x: LaurentSeries):
    return x.residue()


def substitute_power(x: LaurentSeries, n: int) -> LaurentSeries:
    return x.substitute_power(n)


def frobenius_twist(x: LaurentSeries) -> LaurentSeries:
    return x.frobenius_twist()


def _check_radii(s_lo, s_hi):
    s_lo, s_hi = Fraction(as_rational(s_lo)), Fraction(as_rational(s_hi))
    if s_lo <= 0 or s_hi <= 0:
        raise PreconditionError("log-radii must be positive")
    if s_lo > s_hi:
        raise PreconditionError("need s_lo <= s_hi")
    return s_lo, s_hi


def invert(x: LaurentSeries, s_lo, s_hi, order: int) -> LaurentSeries:
    """Inverse of a series with a dominant term on [s_lo, s_hi].

    Writing x = c t^d (1 + y) with λ(y) > 0 on the interval, the result is
    c^(-1) t^(-d) Σ_{k ≤ order} (-y)^k.  Then x·result - 1 = -(-y)^(order+1),
    whose λ exceeds order times the smaller dominance margin at both radii.
    """
    s_lo, s_hi = _check_radii(s_lo, s_hi)
    if order < 1:
        raise PreconditionError("order must be positive")
    dom = x.dominant_term(s_lo, s_hi)
    if dom is None:
        raise NotInvertibleError("no dominant term on the window")
    d, c, _, _ = dom
    field = x.field
    lead = LaurentSeries.monomial(field, c, d)
    c_inv = field.one / c
    lead_inv = LaurentSeries.monomial(field, c_inv, -d)
    y = (x - lead) * lead_inv
    if y.is_zero():
        return lead_inv
    minus_y = -y
    acc = LaurentSeries.constant(field, 1)
    power = LaurentSeries.constant(field, 1)
    for _ in range(order):
        power = power * minus_y
        acc = acc + power
    approx = acc * lead_inv
    # truncation error: c^(-1) t^(-d) Σ_{k > order} (-y)^k
    trunc_tail = {}
    for s in (s_lo, s_hi):
        lam_y = y.certified_lambda(s)
        trunc_tail[s] = -(field.valuation(c) + s * d) + (order + 1) * lam_y
    if y.exact:
        lo, hi = _geometric_window(y, order, d)
    else:
        lo, hi = INF, NEG_INF
    lo = _window_max(lo, approx.lo)
    hi = _window_min(hi, approx.hi)
    tail = {}
    for s, b in trunc_tail.items():
        prior = approx.tail_bound(s)
        tail[s] = b if prior is None or prior is INF else min(b, prior)
    return LaurentSeries(field, dict(approx.terms), lo, hi, tail, _trusted=True)


def _geometric_window(y, order, d):
    """Window of c^(-1) t^(-d) Σ_{k ≤ order} (-y)^k as an approximant."""
    ymin, ymax = y.min_exponent(), y.max_exponent()
    k = order + 1
    if ymax < 0:
        return k * ymax - d + 1, INF
    if ymin > 0:
        return NEG_INF, k * ymin - d - 1
    return INF, NEG_INF


def evaluate_poly(P, z: LaurentSeries) -> LaurentSeries:
    """Horner evaluation of Σ P[i] x^i at x = z."""
    acc = None
    for c in reversed(P):
        acc = c if acc is None else acc * z + c
    return acc


def _derivative_poly(P):
    return [P[i] * i for i in range(1, len(P))]


@dataclass(frozen=True)
class NewtonStep:
    z: LaurentSeries
    residual_lo: object
    residual_hi: object


def newton_iterates(P, s_lo, s_hi, max_steps: int = 64):
    """Yield the Newton iterates z_0 = 1, z_1, ... for a monic P.

    P is the ascending coefficient list c_0, ..., c_n with c_n = 1.  Each
    iterate is an exact Laurent polynomial; its residual λ_s(P(z_i)) at the
    two radii is exact as well.  The iteration stops once P(z_i) = 0.
    """
    s_lo, s_hi = _check_radii(s_lo, s_hi)
    field, P, margin = _check_hensel(P, s_lo, s_hi)
    dP = _derivative_poly(P)
    z = LaurentSeries.constant(field, 1)
    prev = None
    for _ in range(max_steps + 1):
        r = evaluate_poly(P, z)
        res = (r.stored_lambda(s_lo), r.stored_lambda(s_hi))
        yield NewtonStep(z, res[0], res[1])
        if r.is_zero():
            return
        if prev is not None and not (res[0] > prev[0] and res[1] > prev[1]):
            raise IterationError("Newton residual stopped improving")
        prev = res
        deriv = evaluate_poly(dP, z)
        cut = (2 * res[0] + margin, 2 * res[1] + margin)
        inv = _approx_inverse(deriv, s_lo, s_hi, cut)
        if inv is None:
            raise IterationError("P'(z) is not invertible on the window")
        z = (z - r * inv).drop_small(s_lo, s_hi, *cut)
    raise IterationError("Newton iteration did not converge within the step limit")


def _approx_inverse(x, s_lo, s_hi, cutoff):
    """Exact Laurent polynomial w with λ_s(x·w - 1) > cutoff_s at both radii.

    Geometric series with terms beyond the cutoff discarded along the way;
    returns None without a dominant term.
    """
    dom = x.dominant_term(s_lo, s_hi)
    if dom is None:
        return None
    d, c, m_lo, m_hi = dom
    field = x.field
    lead_inv = LaurentSeries.monomial(field, field.one / c, -d)
    minus_y = -((x.as_exact() - LaurentSeries.monomial(field, c, d)) * lead_inv)
    # x·w - 1 = (1 + y)·g - 1 does not see the leading monomial
    cut = cutoff
    acc = LaurentSeries.constant(field, 1)
    power = acc
    steps = 0
    while power:
        steps += 1
        power = (power * minus_y).round_to(s_lo, s_hi, *cut)
        acc = acc + power
        if steps * min(m_lo, m_hi) > max(cut) + 1:
            break
    return acc * lead_inv


def _check_hensel(P, s_lo, s_hi):
    if len(P) < 2:
        raise PreconditionError("P must have degree at least 1")
    field = P[-1].field if isinstance(P[-1], LaurentSeries) else None
    for c in P:
        if isinstance(c, LaurentSeries):
            field = c.field
            break
    if field is None:
        raise PreconditionError("P needs at least one LaurentSeries coefficient")
    P = [c if isinstance(c, LaurentSeries) else LaurentSeries.constant(field, c) for c in P]
    for c in P:
        if not c.exact:
            raise PreconditionError("Newton iteration needs exact coefficients")
    if P[-1] != LaurentSeries.constant(field, 1):
        raise PreconditionError("P must be monic")
    n = len(P) - 1
    checks = [P[i] for i in range(n - 1)] + [P[n - 1] + 1]
    margin = INF
    for c in checks:
        for s in (s_lo, s_hi):
            lam = c.stored_lambda(s)
            if not lam > 0:
                raise HypothesisError(
                    "P is not congruent to x^(n-1)(x-1) modulo the maximal ideal on the window")
            margin = min(margin, lam)
    if margin is INF:
        margin = Fraction(1)
    return field, P, margin


def hensel_steps(P, order: int, s_lo, s_hi):
    """Newton iterates up to the first one whose residual beats order × margin."""
    s_lo, s_hi = _check_radii(s_lo, s_hi)
    _, P_, margin = _check_hensel(P, s_lo, s_hi)
    goal = order * margin
    steps = []
    for step in newton_iterates(P_, s_lo, s_hi):
        steps.append(step)
        if step.residual_lo > goal and step.residual_hi > goal:
            break
    return steps


def hensel_lift(P, order: int, s_lo, s_hi) -> LaurentSeries:
    """The root z ≡ 1 of a monic P ≡ x^(n-1)(x - 1) (mod 𝔪) on [s_lo, s_hi].

    Runs Newton's iteration until λ_s(P(z)) exceeds ``order`` times the
    smallest hypothesis margin at both radii.  The returned series records
    that residual as its tail bound, since |z* - z| = |P(z)| when |P'| = 1.
    """
    s_lo, s_hi = _check_radii(s_lo, s_hi)
    field, P_, _ = _check_hensel(P, s_lo, s_hi)
    step = hensel_steps(P, order, s_lo, s_hi)[-1]
    z = step.z
    if step.residual_lo is INF:
        return z
    r = evaluate_poly(P_, z)
    supports = [c.support() for c in P_]
    if all(k <= 0 for sup in supports for k in sup):
        lo, hi = r.max_exponent() + 1, INF
    elif all(k >= 0 for sup in supports for k in sup):
        lo, hi = NEG_INF, r.min_exponent() - 1
    else:
        lo, hi = INF, NEG_INF
    tail = {s_lo: step.residual_lo, s_hi: step.residual_hi}
    return LaurentSeries(field, dict(z.terms), lo, hi, tail, _trusted=True)
