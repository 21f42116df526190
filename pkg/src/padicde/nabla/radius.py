"""Generic radius of convergence and highest-break estimation.

With T = d/dt and D_m the matrix of T^m on the basis,

    D_0 = I,    D_(m+1) = d/dt(D_m) + N·D_m,

the spectral norm of T at ρ = p^(-s) is max(p^(-1/(p-1)) ρ^(-1), limsup |D_m|^(1/m)),
and the generic radius is R = p^(-1/(p-1)) / |T|_spec.  In log form

    λ_ring = 1/(p-1) - s,   λ_spec = min(λ_ring, λ_tail),   r = 1/(p-1) - λ_spec,

where r = -log_p R, so r ≥ s always.

λ_tail, the limit of λ_s(D_m)/m, is estimated from the subsequence
m = p^k.  Along it the valuation of m! is exactly (m-1)/(p-1) and the
growth is well modelled by λ_s(D_m) = A·m + B·k + C; fitting that through
the last three p-powers gives A.  The B·k term absorbs the logarithmic
drift that makes plain averages of λ/m converge like O(log m / m).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .. import matrix as mx
from ..errors import BudgetError, PreconditionError
from ..extended import INF, as_rational, format_rational, is_finite
from ..laurent import LaurentSeries
from .module import D_DT, NablaModule

BREAK_REL_TOL = Fraction(1, 20)
BREAK_ABS_TOL = Fraction(1, 20)


def default_budget(p: int) -> int:
    return 8 * p * p


def derivative_matrices(m: NablaModule, count: int):
    """[D_0, D_1, ..., D_count] for a module in d/dt form."""
    if m.operator != D_DT:
        raise PreconditionError("derivative matrices need the d/dt form; convert first")
    if count < 0:
        raise PreconditionError("count must be nonnegative")
    N = m.rows()
    D = mx.identity(m.field, m.rank)
    out = [D]
    for _ in range(count):
        D = mx.sadd(mx.smap(lambda x: x.derivative("d/dt"), D), mx.smul(N, D))
        out.append(D)
    return out


def _p_powers(p: int, budget: int):
    """Exponents k with p^k ≤ budget."""
    ks = []
    k, m = 0, 1
    while m <= budget:
        ks.append(k)
        k += 1
        m *= p
    return ks


def fit_growth(p: int, k: int, y0, y1, y2):
    """Exact A, B, C with y_j = A p^(k+j) + B (k+j) + C for j = 0, 1, 2."""
    pk = Fraction(p) ** k
    d1 = y1 - y0
    d2 = y2 - y1
    A = (d2 - d1) / (pk * (p - 1) ** 2)
    B = d1 - A * pk * (p - 1)
    C = y0 - A * pk - B * k
    return A, B, C


@dataclass(frozen=True)
class TailFit:
    """Growth model of λ_s(D_m) along m = p^k."""

    slope: object          # A, the λ_tail estimate (INF if D vanishes)
    log_coeff: object      # B
    previous_slope: object  # A from the preceding triple, when available
    indices: tuple          # the m values used

    @property
    def drift(self):
        if self.previous_slope is None or not is_finite(self.slope) or not is_finite(self.previous_slope):
            return None
        return abs(self.slope - self.previous_slope)


def _fit_from_values(p, ks, values):
    """values[k] = λ at m = p^k.  Fit the last three."""
    if len(ks) < 3:
        raise BudgetError("the budget must reach at least p^2 for the tail fit")
    last = ks[-3:]
    ys = [values[k] for k in last]
    idx = tuple(p ** k for k in last)
    if ys[-1] is INF:
        return TailFit(INF, 0, None, idx)
    if not all(is_finite(y) for y in ys):
        # entries vanish and reappear; fall back to the last ratio
        return TailFit(Fraction(ys[-1]) / idx[-1], 0, None, idx)
    A, B, _ = fit_growth(p, last[0], *ys)
    prev = None
    if len(ks) >= 4:
        ys_prev = [values[k] for k in ks[-4:-1]]
        if all(is_finite(y) for y in ys_prev):
            prev = fit_growth(p, ks[-4], *ys_prev)[0]
    return TailFit(A, B, prev, idx)


def _lambda_table(D_list, p, ks, s_values):
    """λ_s(D_(p^k)) for each s and k (min over entries)."""
    table = {}
    for s in s_values:
        table[s] = {k: mx.stored_lambda(D_list[p ** k], s) for k in ks}
    return table


@dataclass(frozen=True)
class RadiusSample:
    s: Fraction
    lam_spec: object
    r: Fraction
    iterations: int
    tail_window: int
    lam_tail: object = None
    log_coeff: object = None
    drift: object = None

    @property
    def r_minus_s(self):
        return self.r - self.s


@dataclass(frozen=True)
class RadiusProfile:
    p: int
    samples: tuple

    def r(self, s):
        for smp in self.samples:
            if smp.s == s:
                return smp.r
        raise KeyError(s)

    def to_rows(self):
        return [(format_rational(x.s), format_rational(x.lam_spec), format_rational(x.r),
                 format_rational(x.r_minus_s), x.iterations) for x in self.samples]

    def to_json(self):
        return {"p": self.p, "samples": [
            {"s": format_rational(x.s), "lambda_spec": format_rational(x.lam_spec),
             "r": format_rational(x.r), "r_minus_s": format_rational(x.r_minus_s),
             "iterations": x.iterations, "tail_window": x.tail_window}
            for x in self.samples]}


def _as_s(s) -> Fraction:
    v = as_rational(s)
    if not is_finite(v) or v <= 0:
        raise PreconditionError("log-radii must be positive rationals")
    return Fraction(v)


def _profile_from_derivatives(m: NablaModule, s_list, D_list, budget):
    p = m.p
    ks = _p_powers(p, budget)
    if len(ks) < 3:
        raise BudgetError(f"budget {budget} is below p^2 = {p * p}")
    table = _lambda_table(D_list, p, ks, s_list)
    ring0 = Fraction(1, p - 1)
    samples = []
    for s in s_list:
        fit = _fit_from_values(p, ks, table[s])
        lam_ring = ring0 - s
        lam_spec = lam_ring if not fit.slope < lam_ring else fit.slope
        r = ring0 - lam_spec
        samples.append(RadiusSample(s, lam_spec, r, p ** ks[-1], len(fit.indices),
                                    fit.slope, fit.log_coeff, fit.drift))
    return RadiusProfile(p, tuple(samples))


def generic_radius_profile(m: NablaModule, s_list, budget: int | None = None,
                           check_window: bool = True) -> RadiusProfile:
    """r(s) = -log_p R(E, p^(-s)) at each requested log-radius."""
    s_list = [_as_s(s) for s in s_list]
    if check_window:
        for s in s_list:
            if not m.contains_radius(s):
                raise PreconditionError(f"s = {s} lies outside the module's window {m.window}")
    budget = default_budget(m.p) if budget is None else budget
    if budget < 2:
        raise BudgetError("the iteration budget must be at least 2")
    ks = _p_powers(m.p, budget)
    top = m.p ** ks[-1]
    D_list = derivative_matrices(m.to_d_dt(), top)
    return _profile_from_derivatives(m, s_list, D_list, budget)


def spectral_norm(m: NablaModule, s, budget: int | None = None):
    """λ_spec = -log_p |d/dt|_(ρ, spec) at ρ = p^(-s)."""
    return generic_radius_profile(m, [s], budget, check_window=False).samples[0].lam_spec


@dataclass(frozen=True)
class BreakEstimate:
    beta: Fraction
    samples: tuple       # (s, r, beta at s)
    delta: Fraction
    tolerance: Fraction
    consistent: bool
    budget: int

    def to_json(self):
        return {"beta": format_rational(self.beta),
                "samples": [{"s": format_rational(s), "r": format_rational(r),
                             "beta": format_rational(b)} for s, r, b in self.samples],
                "delta": format_rational(self.delta),
                "tolerance": format_rational(self.tolerance),
                "consistent": self.consistent,
                "budget": self.budget}


def break_tolerance(beta) -> Fraction:
    return max(BREAK_REL_TOL * abs(beta), BREAK_ABS_TOL)


def highest_break_estimate(m: NablaModule, s_pair, budget: int | None = None,
                           retries: int = 2) -> BreakEstimate:
    """β̂ = r(s)/s - 1 at two small log-radii, headline at the smaller one.

    When the two samples disagree beyond tolerance the budget is doubled,
    up to ``retries`` times.
    """
    s_pair = [_as_s(s) for s in s_pair]
    if len(s_pair) != 2 or s_pair[0] == s_pair[1]:
        raise PreconditionError("need two distinct log-radii")
    budget = default_budget(m.p) if budget is None else budget
    while True:
        prof = generic_radius_profile(m, s_pair, budget)
        samples = tuple((x.s, x.r, x.r / x.s - 1) for x in prof.samples)
        head = min(samples, key=lambda t: t[0])[2]
        delta = abs(samples[0][2] - samples[1][2])
        tol = break_tolerance(head)
        ok = delta <= tol
        if ok or retries <= 0:
            return BreakEstimate(head, samples, delta, tol, ok, budget)
        budget *= 2
        retries -= 1


@dataclass(frozen=True)
class OverconvergenceReport:
    samples: tuple           # (s, r, r - s)
    limit: Fraction          # r - s extrapolated linearly to s = 0
    decreasing: bool
    solvable: bool

    def to_json(self):
        return {"samples": [{"s": format_rational(s), "r": format_rational(r),
                             "r_minus_s": format_rational(d)} for s, r, d in self.samples],
                "limit": format_rational(self.limit),
                "decreasing": self.decreasing, "solvable": self.solvable}


def overconvergence_check(m: NablaModule, s_list, budget: int | None = None,
                          tolerance=Fraction(1, 20)) -> OverconvergenceReport:
    """Is R(E, ρ)/ρ → 1 as ρ → 1?  Looks at r(s) - s along decreasing s."""
    s_list = [_as_s(s) for s in s_list]
    if len(s_list) < 2:
        raise PreconditionError("need at least two samples")
    if any(b >= a for a, b in zip(s_list, s_list[1:])):
        raise PreconditionError("samples must decrease toward 0")
    prof = generic_radius_profile(m, s_list, budget)
    rows = tuple((x.s, x.r, x.r - x.s) for x in prof.samples)
    decreasing = all(b[2] <= a[2] for a, b in zip(rows, rows[1:]))
    (s1, _, d1), (s2, _, d2) = rows[-2], rows[-1]
    slope = (d1 - d2) / (s1 - s2)
    limit = d2 - slope * s2
    solvable = decreasing and abs(limit) <= tolerance
    return OverconvergenceReport(rows, limit, decreasing, solvable)


@dataclass(frozen=True)
class TaylorSolution:
    """Y(Δ) = Σ_m coefficients[m]·Δ^m with coefficients[m] = D_m/m!."""

    coefficients: tuple
    radii: dict = dc_field(default_factory=dict)   # s -> r_T(s)

    def __len__(self):
        return len(self.coefficients)


def taylor_solution_matrix(m: NablaModule, order: int, s_list=()) -> TaylorSolution:
    """Horizontal sections at a generic point, with their convergence radius.

    The radius at s comes from the same p-power fit applied to
    λ_s(D_m/m!) = λ_s(D_m) - v(m!); the series converges for
    -log_p|Δ| > -A, so r_T = max(-A, s).
    """
    if m.operator != D_DT:
        raise PreconditionError("the Taylor solver needs the d/dt form; convert first")
    D_list = derivative_matrices(m, order)
    coeffs = []
    fact = Fraction(1)
    for k, D in enumerate(D_list):
        if k:
            fact *= k
        inv = 1 / fact
        coeffs.append(tuple(tuple(x.scale(inv) for x in row) for row in D))
    radii = {}
    p = m.p
    ks = _p_powers(p, order)
    for s in (_as_s(s) for s in s_list):
        if len(ks) < 3:
            raise BudgetError(f"order {order} is below p^2 = {p * p}")
        values = {k: mx.stored_lambda(coeffs[p ** k], s) for k in ks}
        fit = _fit_from_values(p, ks, values)
        r_t = s if fit.slope is INF else max(-fit.slope, s)
        radii[s] = r_t
    return TaylorSolution(tuple(coeffs), radii)


def leibniz_expansion(m: NablaModule, x: LaurentSeries, column: int, order: int):
    """Σ_k C(order, k) (d^k x/dt^k) D_(order-k) e_column, for cross-checks."""
    D_list = derivative_matrices(m, order)
    out = [LaurentSeries.zero(m.field) for _ in range(m.rank)]
    dx = x
    binom = 1
    for k in range(order + 1):
        D = D_list[order - k]
        for i in range(m.rank):
            out[i] = out[i] + dx * D[i][column] * binom
        dx = dx.derivative("d/dt")
        binom = binom * (order - k) // (k + 1)
    return out
