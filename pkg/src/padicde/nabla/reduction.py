"""Approximating an invertible matrix over an annulus by a Laurent-polynomial one.

Given M invertible over the ring of the annulus s ∈ [s_lo, s_hi], find U over
K[t, 1/t] with unit determinant such that |MU - I| < 1 throughout.  The
recursion mirrors the classical induction on n:

1. scale the last column so that det ≡ 1 to first order;
2. approximate α_i = M_ni / det by Laurent polynomials β_i, close enough
   that Σ β_i C_i ≡ 1 for the cofactors C_i;
3. nudge β_n by p^k until the β_i generate the unit ideal of K[t, 1/t];
4. complete (β_1, ..., β_n) to a determinant-1 matrix A and pass to M·A^(-1),
   whose leading (n-1)-block has unit determinant;
5. reduce that block recursively;
6. clean the last column and then the last row by approximate column
   elimination until every entry of the product is within 1 of I.

Only column operations are used, so U is always a product of
Laurent-polynomial matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .. import matrix as mx
from .. import modular, polyalg
from ..errors import NotInvertibleError, PreconditionError
from ..extended import INF, format_rational
from ..laurent import LaurentSeries, _approx_inverse

SWEEP_LIMIT = 16


@dataclass
class ReductionCertificate:
    """λ(MU - I) at the window ends and at interior radii."""

    margins: dict
    perturbations: list = dc_field(default_factory=list)
    sweeps: list = dc_field(default_factory=list)
    stalled: bool = False

    @property
    def ok(self) -> bool:
        return not self.stalled and all(v > 0 for v in self.margins.values())

    def to_json(self):
        return {"margins": {format_rational(s): format_rational(v)
                            for s, v in sorted(self.margins.items())},
                "perturbations": self.perturbations,
                "sweeps": self.sweeps,
                "stalled": self.stalled,
                "ok": self.ok}


@dataclass(frozen=True)
class Reduction:
    U: tuple
    certificate: ReductionCertificate

    def to_json(self):
        return {"U": [[x.to_json() for x in row] for row in self.U],
                "certificate": self.certificate.to_json()}


# -- Laurent polynomials as (shift, ascending list) -------------------------------

def _to_poly(x: LaurentSeries):
    k0 = x.min_exponent()
    top = x.max_exponent()
    zero = x.field.zero
    return k0, [x.terms.get(k, zero) for k in range(k0, top + 1)]


def _from_poly(field, shift, coeffs):
    return LaurentSeries(field, {shift + i: c for i, c in enumerate(coeffs) if c})


def _monomial(field, c, k):
    return LaurentSeries.monomial(field, c, k)


def _is_monomial(x: LaurentSeries) -> bool:
    return len(x.terms) == 1


_CHECK_PRIMES = (2305843009213693951, 4611686018427388039)


def _gcd_mod(polys, ell):
    """Degree of gcd of the polynomials over F_ell, or None if ell is unlucky."""
    g = None
    for poly in polys:
        red = []
        for c in poly:
            c = Fraction(c)
            if c.denominator % ell == 0:
                return None
            red.append(c.numerator * pow(c.denominator, -1, ell) % ell)
        if red[-1] == 0 or red[0] == 0:
            return None
        g = red if g is None else _gcd_fp(g, red, ell)
        if len(g) == 1:
            return 0
    return len(g) - 1


def _gcd_fp(a, b, ell):
    while any(b):
        while b and b[-1] == 0:
            b = b[:-1]
        if not b:
            break
        inv = pow(b[-1], -1, ell)
        a = list(a)
        while len(a) >= len(b):
            f = a[-1] * inv % ell
            off = len(a) - len(b)
            for i, c in enumerate(b):
                a[off + i] = (a[off + i] - f * c) % ell
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return a


def generate_unit_ideal(xs) -> bool:
    """Do these Laurent polynomials generate K[t, 1/t]?

    Over Q a gcd of degree 0 modulo a large prime settles it; two
    nonconstant modular gcds count as a no (a false no only costs another
    perturbation).  Extension fields use the exact gcd.
    """
    polys = [_to_poly(x)[1] for x in xs if not x.is_zero()]
    if not polys:
        return False
    if xs[0].field.minpoly is None:
        votes = [_gcd_mod(polys, ell) for ell in _CHECK_PRIMES]
        if 0 in votes:
            return True
        if all(v is not None for v in votes):
            return False
    g = None
    for x in xs:
        if x.is_zero():
            continue
        _, p = _to_poly(x)
        g = p if g is None else polyalg.gcd(g, p)
        if polyalg.degree(g) == 0:
            return True
    return g is not None and polyalg.degree(g) == 0


# -- unimodular completion ---------------------------------------------------------

def _col_axpy(mat, dst, src, q):
    """Column dst -= q·column src."""
    for row in mat:
        if not row[src].is_zero():
            row[dst] = row[dst] - q * row[src]


def _row_axpy(mat, dst, src, q):
    """Row dst += q·row src."""
    mat[dst] = [a + q * b if not b.is_zero() else a for a, b in zip(mat[dst], mat[src])]


def _pair_bezout(x: LaurentSeries, y: LaurentSeries):
    """(u, v) with u·x + v·y = 1 over Q[t, 1/t], or None."""
    if x.is_zero() or y.is_zero():
        return None
    ex, px = _to_poly(x)
    ey, py = _to_poly(y)
    got = modular.bezout(px, py)
    if got is None:
        return None
    field = x.field
    return _from_poly(field, -ex, got[0]), _from_poly(field, -ey, got[1])


def _pair_completion(beta):
    """Completion through one coprime pair (β_i, β_j), over Q only.

    With u β_i + v β_j = 1 and w = u e_i + v e_j, the columns
    e_k - β_k w (k ≠ i, j) clear the other entries; the block
    [[u, -β_j], [v, β_i]] on columns i, j sends (β_i, β_j) to (1, 0).
    Both steps have determinant 1, and their inverses are explicit.
    """
    n = len(beta)
    field = beta[0].field
    order = [n - 1] + list(range(n - 1))
    pairs = [(i, j) for a, i in enumerate(order) for j in order[a + 1:]]
    for i, j in pairs:
        got = _pair_bezout(beta[i], beta[j])
        if got is not None:
            break
    else:
        return None
    u, v = got
    zero, one = LaurentSeries.zero(field), LaurentSeries.constant(field, 1)
    Q = [[one if r == c else zero for c in range(n)] for r in range(n)]
    Qinv = [[one if r == c else zero for c in range(n)] for r in range(n)]
    for k in range(n):
        if k in (i, j) or beta[k].is_zero():
            continue
        Q[i][k], Q[j][k] = -(beta[k] * u), -(beta[k] * v)
        Qinv[i][k], Qinv[j][k] = beta[k] * u, beta[k] * v
    # Q ← Q·T with T the 2×2 block on columns i, j; Q^(-1) ← T^(-1)·Q^(-1)
    for row in Q:
        ci, cj = row[i], row[j]
        row[i] = ci * u + cj * v
        row[j] = cj * beta[i] - ci * beta[j]
    ri, rj = Qinv[i], Qinv[j]
    Qinv[i] = [a * beta[i] + b * beta[j] for a, b in zip(ri, rj)]
    Qinv[j] = [b * u - a * v for a, b in zip(ri, rj)]
    sign = 1
    if i != n - 1:
        for row in Q:
            row[i], row[n - 1] = row[n - 1], row[i]
        Qinv[i], Qinv[n - 1] = Qinv[n - 1], Qinv[i]
        sign = -1
    # β·Q = e_n and det Q = sign, so A = diag(sign, 1, ..., 1)·Q^(-1)
    if sign < 0:
        Qinv[0] = [-x for x in Qinv[0]]
        for row in Q:
            row[0] = -row[0]
    return Qinv, Q


def unimodular_completion(beta):
    """A over K[t, 1/t] with det A = 1 and last row β, together with A^(-1).

    The β_i must generate the unit ideal.  Over Q a pair is completed with
    multimodular Bezout coefficients; with more entries, Euclid on all of
    them keeps degrees lower.  There column operations bring β to (0, ..., 0, g) with g a monomial:
    β·Q = g·e_n.  Then A = diag(a, 1, ..., 1, g)·Q^(-1) with a fixing the
    determinant.
    """
    n = len(beta)
    field = beta[0].field
    if n < 2:
        raise PreconditionError("completion needs at least two entries")
    if n == 2 and field.kind == "Q":
        done = _pair_completion(beta)
        if done is not None:
            return done
    v = list(beta)
    Q = mx.identity(field, n)
    Qinv = mx.identity(field, n)
    det_c, det_k = field.one, 0       # det Q as a monomial c·t^k

    def scale_col(j, c, k):
        # column j of Q times c t^k, row j of Q^(-1) times its inverse
        nonlocal det_c, det_k
        m = _monomial(field, c, k)
        mi = _monomial(field, field.one / c, -k)
        for row in Q:
            row[j] = row[j] * m
        Qinv[j] = [x * mi for x in Qinv[j]]
        v[j] = v[j] * m
        det_c, det_k = det_c * c, det_k + k

    while True:
        live = [i for i in range(n) if not v[i].is_zero()]
        if not live:
            raise NotInvertibleError("β is zero")
        for i in live:
            k0 = v[i].min_exponent()
            if k0:
                scale_col(i, field.one, -k0)
        if len(live) == 1:
            break
        j = min(live, key=lambda i: (v[i].max_exponent(), i))
        _, pj = _to_poly(v[j])
        for i in live:
            if i == j:
                continue
            _, pi = _to_poly(v[i])
            q, _ = polyalg.divmod_poly(pi, pj)
            qs = _from_poly(field, 0, q)
            if qs.is_zero():
                continue
            v[i] = v[i] - qs * v[j]
            _col_axpy(Q, i, j, qs)
            _row_axpy(Qinv, j, i, qs)
    (j,) = [i for i in range(n) if not v[i].is_zero()]
    g = v[j]
    if not _is_monomial(g):
        raise NotInvertibleError("the entries do not generate the unit ideal")
    if j != n - 1:
        for row in Q:
            row[j], row[n - 1] = row[n - 1], row[j]
        Qinv[j], Qinv[n - 1] = Qinv[n - 1], Qinv[j]
        v[j], v[n - 1] = v[n - 1], v[j]
        det_c = -det_c
    (gk, gc), = g.terms.items()
    # det(A) = a · g · det(Q)^(-1) = 1
    a_c = det_c / gc
    a_k = det_k - gk
    A_diag = [_monomial(field, a_c, a_k)] + [LaurentSeries.constant(field, 1)] * (n - 2) + [g]
    Ainv_diag = [_monomial(field, field.one / a_c, -a_k)] + \
        [LaurentSeries.constant(field, 1)] * (n - 2) + [_monomial(field, field.one / gc, -gk)]
    A = [[A_diag[i] * x for x in Qinv[i]] for i in range(n)]
    Ainv = [[x * Ainv_diag[j] for j, x in enumerate(row)] for row in Q]
    return A, Ainv


# -- the reduction -----------------------------------------------------------------

def _lam_pair(x, s_lo, s_hi):
    return x.stored_lambda(s_lo), x.stored_lambda(s_hi)


def _reduce(M, s_lo, s_hi, cert, depth=0):
    field = M[0][0].field
    n = len(M)
    det = mx.sdet(M)
    dom = det.dominant_term(s_lo, s_hi)
    if dom is None:
        raise NotInvertibleError("det(M) has no dominant term on the window: not a unit")
    d, c, _, _ = dom
    scale = _monomial(field, field.one / c, -d)
    if n == 1:
        return [[scale]]
    D = [[LaurentSeries.constant(field, 1) if i == j else LaurentSeries.zero(field)
          for j in range(n)] for i in range(n)]
    D[n - 1][n - 1] = scale
    M1 = [row[:-1] + [row[-1] * scale] for row in M]
    det1 = det * scale

    # approximate α_i = M1_ni / det1 closely enough for the cofactors
    C = [mx.cofactor(M1, n - 1, i) for i in range(n)]
    need = {s: max(-x.stored_lambda(s) for x in C if not x.is_zero()) for s in (s_lo, s_hi)}
    row_min = {s: min(x.stored_lambda(s) for x in M1[n - 1]) for s in (s_lo, s_hi)}
    cut = (need[s_lo] - row_min[s_lo] + 1, need[s_hi] - row_min[s_hi] + 1)
    w = _approx_inverse(det1, s_lo, s_hi, cut)
    keep = (need[s_lo] + 1, need[s_hi] + 1)
    beta = [(M1[n - 1][i] * w).round_to(s_lo, s_hi, *keep) for i in range(n)]

    if not generate_unit_ideal(beta):
        beta = _perturb(beta, field, max(1, int(max(need[s_lo], need[s_hi])) + 1), cert, depth)

    A, Ainv = unimodular_completion(beta)
    M2 = mx.smul(M1, Ainv)
    block = [row[:-1] for row in M2[:-1]]
    V0 = _reduce(block, s_lo, s_hi, cert, depth + 1)
    V = [list(r) + [LaurentSeries.zero(field)] for r in V0]
    V.append([LaurentSeries.zero(field)] * (n - 1) + [LaurentSeries.constant(field, 1)])
    X = mx.smul(M2, V)
    G = mx.identity(field, n)
    _sweep(X, G, s_lo, s_hi, cert, depth)
    return mx.smul(D, mx.smul(Ainv, mx.smul(V, G)))


def _perturb(beta, field, k0, cert, depth, tries=8):
    """β_n + p^k for k = k0, k0 + 1, ...; then the same on β_1.

    p^k with k >= k0 stays inside the tolerance for α.  Moving β_1 is the
    fallback for rows such as (0, ..., 0, β_n) that no constant shift of
    β_n can make unimodular.
    """
    n = len(beta)
    for idx in (n - 1, 0):
        for k in range(k0, k0 + tries):
            trial = list(beta)
            trial[idx] = trial[idx] + LaurentSeries.constant(field, Fraction(field.p) ** k)
            if generate_unit_ideal(trial):
                cert.perturbations.append({"depth": depth, "entry": idx + 1, "k": k})
                return trial
    raise NotInvertibleError("could not perturb β into a unimodular row")


def _sweep(X, G, s_lo, s_hi, cert, depth):
    """Column eliminations on X (mirrored into G) toward X ≈ I.

    Write X = [[B, x], [y, z]] with B ≈ I.  First col n -= Σ_m q_m col m
    with q ≈ B^(-1) x, until |x_i y_j| < 1 and |x_i| < 1; then
    col j -= q_j col n with q_j ≈ y_j / z, until |y_j| < 1.  The
    multipliers are Laurent polynomials, so G stays unipotent.
    """
    n = len(X)
    ends = (s_lo, s_hi)
    field = X[0][0].field

    def lam(x, s):
        return x.stored_lambda(s)

    goal = {s: max(Fraction(0), max(-lam(X[n - 1][j], s) for j in range(n - 1))) for s in ends}
    steps_x = 0
    while True:
        x = [X[i][n - 1] for i in range(n - 1)]
        cur = {s: min(lam(v, s) for v in x) for s in ends}
        if all(cur[s] > goal[s] for s in ends):
            break
        if steps_x >= SWEEP_LIMIT:
            cert.stalled = True
            break
        B = [row[:-1] for row in X[:-1]]
        det_b = mx.sdet(B)
        cut = tuple(goal[s] + 2 for s in ends)
        w = _approx_inverse(det_b, s_lo, s_hi, tuple(cut[k] - cur[s] for k, s in enumerate(ends)))
        if w is None:
            cert.stalled = True
            break
        adj = mx.adjugate(B) if n > 2 else [[LaurentSeries.constant(field, 1)]]
        for m in range(n - 1):
            acc = LaurentSeries.zero(field)
            for k in range(n - 1):
                if not adj[m][k].is_zero() and not x[k].is_zero():
                    acc = acc + adj[m][k] * x[k]
            q = (acc * w).round_to(s_lo, s_hi, *cut)
            if q.is_zero():
                continue
            _col_axpy(X, n - 1, m, q)
            _col_axpy(G, n - 1, m, q)
        steps_x += 1

    steps_w = 0
    while True:
        cur = {s: min(lam(X[n - 1][j], s) for j in range(n - 1)) for s in ends}
        if all(cur[s] > 0 for s in ends):
            break
        if steps_w >= SWEEP_LIMIT:
            cert.stalled = True
            break
        z = X[n - 1][n - 1]
        cut = (Fraction(2), Fraction(2))
        w = _approx_inverse(z, s_lo, s_hi, tuple(2 - cur[s] for s in ends))
        if w is None:
            cert.stalled = True
            break
        for j in range(n - 1):
            q = (X[n - 1][j] * w).round_to(s_lo, s_hi, *cut)
            if q.is_zero():
                continue
            _col_axpy(X, j, n - 1, q)
            _col_axpy(G, j, n - 1, q)
        steps_w += 1
    cert.sweeps.append({"depth": depth, "last_column": steps_x, "last_row": steps_w})


def interior_radii(s_lo, s_hi, count: int = 5):
    step = (s_hi - s_lo) / (count + 1)
    return [s_lo + step * (i + 1) for i in range(count)]


def residual_margins(M, U, s_list):
    """λ_s(MU - I) at each s, computed exactly."""
    field = M[0][0].field
    R = mx.ssub(mx.smul(M, U), mx.identity(field, len(M)))
    return {Fraction(s): mx.stored_lambda(R, Fraction(s)) for s in s_list}


def approximate_reduce(M, s_lo, s_hi) -> Reduction:
    """U over K[t, 1/t], det U a unit, with |MU - I| < 1 on [s_lo, s_hi]."""
    s_lo, s_hi = Fraction(s_lo), Fraction(s_hi)
    if not 0 < s_lo <= s_hi:
        raise PreconditionError("need 0 < s_lo <= s_hi")
    n = len(M)
    if n == 0 or any(len(r) != n for r in M):
        raise PreconditionError("M must be square")
    M = [[x if x.exact else x.as_exact() for x in row] for row in M]
    cert = ReductionCertificate(margins={})
    U = _reduce(M, s_lo, s_hi, cert)
    U = [[x.as_exact() for x in row] for row in U]
    radii = [s_lo, s_hi] + interior_radii(s_lo, s_hi)
    cert.margins = residual_margins(M, U, radii)
    return Reduction(tuple(tuple(r) for r in U), cert)
