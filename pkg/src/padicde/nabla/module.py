"""∇-modules on annuli, encoded by connection matrices.

A module of rank n is a matrix N of Laurent series giving the action of
the chosen derivation on a basis: op(e_j) = Σ_i N_ij e_i.  The derivation
is either d/dt or t·d/dt; the two encodings differ by a factor of t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .. import matrix as mx
from ..coeff import CoeffField
from ..errors import FieldMismatchError, ParseError, PreconditionError
from ..extended import as_rational, format_rational
from ..laurent import LaurentSeries

D_DT = "d/dt"
THETA = "t d/dt"

DEFAULT_WINDOW = (Fraction(1, 1024), Fraction(1))


def _form(op: str) -> str:
    if op in ("d/dt", "d"):
        return D_DT
    if op in ("t d/dt", "t·d/dt", "theta", "t*d/dt"):
        return THETA
    raise PreconditionError(f"unknown operator form {op!r}")


@dataclass(frozen=True)
class NablaModule:
    field: CoeffField
    matrix: tuple
    operator: str = D_DT
    window: tuple = DEFAULT_WINDOW

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise PreconditionError("the connection matrix must be square and nonempty")
        for r in rows:
            for x in r:
                if not isinstance(x, LaurentSeries):
                    raise PreconditionError("matrix entries must be LaurentSeries")
                if x.field != self.field:
                    raise FieldMismatchError("matrix entry over a different field")
        s_min, s_max = (Fraction(as_rational(w)) for w in self.window)
        if not (0 < s_min < s_max):
            raise PreconditionError("window must satisfy 0 < s_min < s_max")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "operator", _form(self.operator))
        object.__setattr__(self, "window", (s_min, s_max))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def p(self) -> int:
        return self.field.p

    def rows(self):
        return [list(r) for r in self.matrix]

    def to_d_dt(self) -> "NablaModule":
        if self.operator == D_DT:
            return self
        return NablaModule(self.field, mx.smap(lambda x: x.shift(-1), self.matrix), D_DT, self.window)

    def to_theta(self) -> "NablaModule":
        if self.operator == THETA:
            return self
        return NablaModule(self.field, mx.smap(lambda x: x.shift(1), self.matrix), THETA, self.window)

    def in_form(self, op: str) -> "NablaModule":
        return self.to_theta() if _form(op) == THETA else self.to_d_dt()

    def contains_radius(self, s) -> bool:
        return self.window[0] <= s <= self.window[1]

    def apply(self, vector):
        """op(Σ v_j e_j) = Σ_j (op v_j) e_j + v_j op(e_j), as a coordinate list."""
        form = "d/dt" if self.operator == D_DT else "t d/dt"
        out = []
        for i in range(self.rank):
            acc = vector[i].derivative(form)
            for j in range(self.rank):
                if not self.matrix[i][j].is_zero() and not vector[j].is_zero():
                    acc = acc + self.matrix[i][j] * vector[j]
            out.append(acc)
        return out

    # -- serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "rank": self.rank,
            "operator": self.operator,
            "matrix": [[x.to_json() for x in row] for row in self.matrix],
            "window": [format_rational(w) for w in self.window],
        }

    @classmethod
    def from_json(cls, data) -> "NablaModule":
        if not isinstance(data, dict):
            raise ParseError("module descriptor must be an object")
        if "construct" in data:
            return construct(data)
        for key in ("field", "matrix"):
            if key not in data:
                raise ParseError(f"module descriptor lacks {key!r}")
        field = CoeffField.from_json(data["field"])
        try:
            matrix = [[LaurentSeries.from_json(field, x) for x in row] for row in data["matrix"]]
        except TypeError as exc:
            raise ParseError("matrix must be a list of rows") from exc
        if "rank" in data and data["rank"] != len(matrix):
            raise ParseError("declared rank does not match the matrix")
        window = data.get("window", DEFAULT_WINDOW)
        try:
            window = tuple(as_rational(w) for w in window)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError("bad window") from exc
        return cls(field, matrix, data.get("operator", D_DT), window)


# -- constructors ------------------------------------------------------------------

def _series(field, terms):
    return LaurentSeries(field, terms)


def constant_module(field: CoeffField, C, operator: str = THETA, window=DEFAULT_WINDOW) -> NablaModule:
    """A module whose connection matrix is the constant matrix C."""
    rows = [[_series(field, {0: c}) for c in row] for row in C]
    return NablaModule(field, rows, operator, window)


def trivial_module(field: CoeffField, n: int = 1, window=DEFAULT_WINDOW) -> NablaModule:
    return constant_module(field, [[0] * n for _ in range(n)], D_DT, window)


def exp_module(field: CoeffField, window=DEFAULT_WINDOW) -> NablaModule:
    """d/dt acts by 1 on the generator: horizontal section exp(-t)."""
    return constant_module(field, [[1]], D_DT, window)


def artin_schreier_module(field: CoeffField, b, n: int, window=DEFAULT_WINDOW) -> NablaModule:
    """Rank one, ∇v = -π n b t^(-n-1) v dt, with π^(p-1) = -p."""
    p = field.p
    if not isinstance(n, int) or n < 1:
        raise PreconditionError("the pole order n must be a positive integer")
    if n % p == 0:
        raise PreconditionError(f"the pole order {n} must be prime to p = {p}")
    pi = field.pi()
    c = -pi * n * field(b)
    return NablaModule(field, [[_series(field, {-n - 1: c})]], D_DT, window)


def _check_constant(field, C):
    n = len(C)
    if n == 0 or any(len(r) != n for r in C):
        raise PreconditionError("expected a nonempty square matrix")
    return [[field(c) for c in row] for row in C]


def is_nilpotent(field, C) -> bool:
    C = _check_constant(field, C)
    return mx.is_zero_matrix(mx.mat_pow(C, len(C), field.one))


def unipotent_from_nilpotent(field: CoeffField, C, window=DEFAULT_WINDOW) -> NablaModule:
    """t·d/dt acts through the nilpotent matrix C."""
    C = _check_constant(field, C)
    if not is_nilpotent(field, C):
        raise PreconditionError("C is not nilpotent")
    return constant_module(field, C, THETA, window)


def jordan_block_sizes(field: CoeffField, C):
    """Block sizes of a nilpotent C from the ranks of its powers."""
    C = _check_constant(field, C)
    n = len(C)
    ranks = [n]
    power = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    while ranks[-1]:
        power = mx.mat_mul(power, C)
        ranks.append(mx.rank(power))
        if len(ranks) > n + 1:
            raise PreconditionError("C is not nilpotent")
    # number of blocks of size ≥ k is rank(C^(k-1)) - rank(C^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least), 0, -1):
        exactly = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes.extend([k] * exactly)
    return sizes


def h0_h1_dims_unipotent(field: CoeffField, C):
    """(dim H^0, dim H^1) of the unipotent module of C: both are the block count."""
    blocks = len(jordan_block_sizes(field, C))
    return blocks, blocks


def _merge_windows(m1: NablaModule, m2: NablaModule):
    lo = max(m1.window[0], m2.window[0])
    hi = min(m1.window[1], m2.window[1])
    if not lo < hi:
        raise PreconditionError("the modules have disjoint windows")
    return lo, hi


def combine(m1: NablaModule, m2: NablaModule | None, how: str) -> NablaModule:
    """Tensor product, direct sum, or dual of the first argument."""
    if how in ("dual", "dual-of-first"):
        rows = mx.smap(lambda x: -x, mx.transpose(m1.rows()))
        return NablaModule(m1.field, rows, m1.operator, m1.window)
    if m2 is None:
        raise PreconditionError(f"{how} needs two modules")
    if m1.field != m2.field:
        raise FieldMismatchError("modules over different fields")
    if m1.operator != m2.operator:
        raise PreconditionError("modules use different operator forms; convert one first")
    window = _merge_windows(m1, m2)
    if how == "tensor":
        i1 = mx.identity(m1.field, m1.rank)
        i2 = mx.identity(m1.field, m2.rank)
        rows = mx.sadd(mx.kron(m1.rows(), i2), mx.kron(i1, m2.rows()))
    elif how in ("direct-sum", "sum"):
        rows = mx.block_diag(m1.rows(), m2.rows())
    else:
        raise PreconditionError(f"unknown combination {how!r}")
    return NablaModule(m1.field, rows, m1.operator, window)


def pullback(m: NablaModule, kind) -> NablaModule:
    """Pull back along t ↦ t^n (kind = n or "power-n") or the Frobenius lift.

    In d/dt form N'(t) = n t^(n-1) N(t^n); in t·d/dt form N'(t) = n N(t^n).
    The Frobenius pullback is the n = p case with σ applied to coefficients.
    """
    p = m.p
    if kind == "frobenius":
        n, frob = p, True
    else:
        if isinstance(kind, str):
            if not kind.startswith("power-"):
                raise PreconditionError(f"unknown pullback {kind!r}")
            kind = int(kind[len("power-"):])
        n, frob = kind, False
        if not isinstance(n, int) or n < 1:
            raise PreconditionError("pullback exponent must be a positive integer")

    def sub(x):
        return x.frobenius_twist() if frob else x.substitute_power(n)

    if m.operator == THETA:
        rows = mx.smap(lambda x: sub(x).scale(n), m.matrix)
    else:
        rows = mx.smap(lambda x: sub(x).shift(n - 1).scale(n), m.matrix)
    window = (m.window[0] / n, m.window[1] / n)
    return NablaModule(m.field, rows, m.operator, window)


# -- JSON shorthand constructors ------------------------------------------------------

def construct(data) -> NablaModule:
    """Build a module from a short descriptor such as

    {"construct": "artin_schreier", "field": {"p": 2, "kind": "Q"}, "b": "1", "n": 3}
    """
    kind = data["construct"]
    window = tuple(as_rational(w) for w in data.get("window", DEFAULT_WINDOW))
    if kind in ("tensor", "direct-sum", "dual"):
        args = [NablaModule.from_json(a) for a in data.get("args", [])]
        if not args:
            raise ParseError(f"{kind} needs 'args'")
        if kind == "dual":
            return combine(args[0], None, "dual")
        out = args[0]
        for nxt in args[1:]:
            if nxt.operator != out.operator:
                nxt = nxt.in_form(out.operator)
            out = combine(out, nxt, kind)
        return out
    if kind == "pullback":
        base = NablaModule.from_json(data["module"])
        return pullback(base, data.get("kind", "frobenius"))
    if "field" not in data:
        raise ParseError("constructor needs a 'field'")
    field = CoeffField.from_json(data["field"])
    if kind == "artin_schreier":
        return artin_schreier_module(field, data.get("b", "1"), int(data["n"]), window)
    if kind == "unipotent":
        return unipotent_from_nilpotent(field, data["C"], window)
    if kind == "constant":
        return constant_module(field, data["C"], data.get("operator", THETA), window)
    if kind == "exp":
        return exp_module(field, window)
    if kind == "trivial":
        return trivial_module(field, int(data.get("rank", 1)), window)
    raise ParseError(f"unknown constructor {kind!r}")
