"""Frobenius structures and Frobenius antecedents.

Everything uses the standard lift σ(t) = t^p, for which the factor
(dt^σ/dt)/(t^σ/t) equals p, so a Frobenius-structure matrix in t·d/dt form
evolves by N_(l+1) = p·σ(N_l).

The antecedent construction: for M with R(M, ρ) > p^(-1/(p-1)) ρ, the
Taylor series

    h_j(v) = Σ_n (ζ^j - 1)^n t^n / n! · T^n v

converge and realize the μ_p action t ↦ ζ^j t semilinearly.  The averages
f_i(v) = t^(-i) Σ_j ζ^(-ij) h_j(v) are invariant, and n of them forming a
basis over R give F over the ring in u = t^p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .. import matrix as mx
from ..errors import HypothesisError, PrecisionError, PreconditionError
from ..extended import INF, format_rational
from ..laurent import LaurentSeries, invert
from .module import THETA, NablaModule
from .radius import break_tolerance, derivative_matrices, generic_radius_profile


@dataclass(frozen=True)
class FrobeniusStep:
    matrix: tuple
    lam_fixed: object      # λ_s(N_l) at the starting radius
    lam_shrunk: object     # λ at s/p^l, the radius the l-th pullback lives on


def frobenius_structure_iterate(m: NablaModule, steps: int, s=None):
    """N_0 = matrix of m (t·d/dt form), N_(l+1) = p·σ(N_l)."""
    if m.operator != THETA:
        raise PreconditionError("the Frobenius recurrence uses the t·d/dt form")
    p = m.p
    s = m.window[1] if s is None else Fraction(s)
    N = m.rows()
    out = []
    for l in range(steps + 1):
        out.append(FrobeniusStep(tuple(tuple(r) for r in N), mx.stored_lambda(N, s),
                                 mx.stored_lambda(N, s / p ** l)))
        N = mx.smap(lambda x: x.frobenius_twist().scale(p), N)
    return out


@dataclass(frozen=True)
class Antecedent:
    """F with σ*F ≅ M, plus the evidence.

    ``basis`` holds the coordinates (in M's basis) of the sections that
    become F's basis after pullback; ``precision`` is a lower bound for λ
    of the discarded truncation noise in F's matrix at each window end.
    """

    module: NablaModule
    basis: tuple
    precision: dict
    selected: tuple

    def to_json(self):
        return {"module": self.module.to_json(),
                "basis": [[x.to_json() for x in row] for row in self.basis],
                "precision": {format_rational(s): format_rational(v)
                              for s, v in sorted(self.precision.items())},
                "selected": [list(x) for x in self.selected]}


def _taylor_twists(m_d, zeta, order):
    """H_j = Σ_{n ≤ order} (ζ^j - 1)^n / n! · t^n D_n for j = 0..p-1."""
    field = m_d.field
    p = field.p
    D = derivative_matrices(m_d, order + p)
    H = []
    for j in range(p):
        c = zeta ** j - 1
        acc = mx.zeros(field, m_d.rank)
        coef = field.one
        for n in range(order + 1):
            if n:
                coef = coef * c / n
            if not coef:
                break
            acc = mx.sadd(acc, mx.smap(lambda x, k=coef, sh=n: x.shift(sh).scale(k), D[n]))
        H.append(acc)
    return H, D


def _truncation_level(D, zeta, order, p, s):
    """λ_s of the first omitted Taylor terms (a precision estimate)."""
    field = zeta.field if hasattr(zeta, "field") else None
    best = INF
    for j in range(1, p):
        c = zeta ** j - 1
        vc = (field.valuation(c) if field is not None else _vp_q(c, p))
        fact_v = Fraction(0)
        for n in range(1, order + p + 1):
            fact_v += _vp_q(Fraction(n), p)
            if n <= order:
                continue
            lam = n * vc - fact_v + n * s + mx.stored_lambda(D[n], s)
            best = min(best, lam)
    return best


def _vp_q(x, p):
    from ..coeff import vp_rational
    return vp_rational(x, p)


def _det_margin(B, s_lo, s_hi):
    det = mx.sdet(B)
    dom = det.dominant_term(s_lo, s_hi)
    if dom is None:
        return None, det
    return min(dom[2], dom[3]), det


def frobenius_antecedent(m: NablaModule, order: int = 32, window=None, budget=None) -> Antecedent:
    """F on the p-th-power annulus with σ*F ≅ m, built by μ_p averaging."""
    field = m.field
    p = field.p
    zeta = field.zeta()
    s_lo, s_hi = window if window is not None else m.window
    s_lo, s_hi = Fraction(s_lo), Fraction(s_hi)
    prof = generic_radius_profile(m, [s_lo, s_hi], budget, check_window=False)
    for smp in prof.samples:
        if not smp.r < Fraction(1, p - 1) + smp.s:
            raise HypothesisError(
                f"generic radius too small at s = {smp.s}: r = {smp.r} is not below 1/(p-1) + s")
    m_d = m.to_d_dt()
    n = m.rank
    H, D = _taylor_twists(m_d, zeta, order)

    candidates = []
    for i in range(p):
        acc = mx.zeros(field, n)
        for j in range(p):
            w = zeta ** ((-i * j) % p)
            acc = mx.sadd(acc, mx.smap(lambda x, c=w: x.scale(c), H[j]))
        acc = mx.smap(lambda x, sh=i: x.shift(-sh), acc)
        for k in range(n):
            col = [acc[r][k] for r in range(n)]
            if any(not x.is_zero() for x in col):
                candidates.append(((i, k), col))

    best = None
    for combo in combinations(range(len(candidates)), n):
        B = [[candidates[c][1][r] for c in combo] for r in range(n)]
        margin, det = _det_margin(B, s_lo, s_hi)
        if margin is None:
            continue
        if best is None or margin > best[0]:
            best = (margin, combo, B, det)
    if best is None:
        raise PrecisionError("no averaged sections form a basis on the window; raise the order")
    _, combo, B, det = best

    precision = {}
    for s in (s_lo, s_hi):
        precision[s] = _truncation_level(D, zeta, order, p, s)

    adj = mx.adjugate(B)
    det_inv = _inverse_on_window(det, s_lo, s_hi, precision)
    G = m.to_theta().rows()
    thetaB = mx.smap(lambda x: x.derivative("t d/dt"), B)
    rhs = mx.sadd(thetaB, mx.smul(G, B))
    GF_t = mx.smul(adj, rhs)
    GF_t = mx.smap(lambda x: (x * det_inv).as_exact(), GF_t)

    # noise tolerance: the Taylor truncation level, moved through B^(-1)
    cutoff = {}
    for s in (s_lo, s_hi):
        cutoff[s] = (precision[s] + mx.stored_lambda(adj, s) - det.stored_lambda(s)
                     + min(Fraction(0), mx.stored_lambda(G, s)))
    rows = []
    noise = {s_lo: INF, s_hi: INF}
    for row in GF_t:
        out_row = []
        for x in row:
            terms = {}
            for k, c in x.terms.items():
                need = max(cutoff[s] - s * k for s in (s_lo, s_hi))
                if need is not INF:
                    m_prec = math.floor(need) + 1
                    rounded = field.round(c, m_prec)
                    if rounded != c:
                        for s in noise:
                            noise[s] = min(noise[s], m_prec + s * k)
                    c = rounded
                if not c:
                    continue
                if k % p:
                    raise PrecisionError(
                        f"term t^{k} of the antecedent matrix is not a p-th power; raise the order")
                terms[k // p] = c / p
            out_row.append(LaurentSeries(field, terms))
        rows.append(out_row)
    F = NablaModule(field, rows, THETA, (p * s_lo, p * s_hi))
    selected = tuple(candidates[c][0] for c in combo)
    prec = {p * s: min(cutoff[s], noise[s]) - 1 for s in (s_lo, s_hi)}
    return Antecedent(F, tuple(tuple(r) for r in B), prec, selected)


def _inverse_on_window(det, s_lo, s_hi, precision):
    dom = det.dominant_term(s_lo, s_hi)
    d, c, m_lo, m_hi = dom
    if len(det.terms) == 1:
        return LaurentSeries.monomial(det.field, det.field.one / c, -d)
    want = max(precision.values())
    order = max(4, int(want / min(m_lo, m_hi)) + 2) if want is not INF else 32
    return invert(det, s_lo, s_hi, order).as_exact()


def radius_relation(F: NablaModule, M: NablaModule, s_list, budget=None):
    """Compare r_F(p·s) with p·r_M(s); returns (holds, rows)."""
    p = M.p
    s_list = [Fraction(s) for s in s_list]
    prof_m = generic_radius_profile(M, s_list, budget, check_window=False)
    prof_f = generic_radius_profile(F, [p * s for s in s_list], budget, check_window=False)
    rows = []
    holds = True
    for sm, sf in zip(prof_m.samples, prof_f.samples):
        lhs, rhs = sf.r, p * sm.r
        ok = abs(lhs - rhs) <= break_tolerance(rhs)
        holds = holds and ok
        rows.append((sm.s, lhs, rhs, ok))
    return holds, rows


def antecedent_residual(m: NablaModule, ant: Antecedent):
    """λ of θB + G_M·B − B·G_(σ*F) at the window ends of m (∞ when exact).

    This is the isomorphism σ*F ≅ M witnessed by the basis change B.
    """
    from .module import pullback
    G = m.to_theta().rows()
    B = [list(r) for r in ant.basis]
    G_pull = pullback(ant.module, "frobenius").rows()
    lhs = mx.sadd(mx.smap(lambda x: x.derivative("t d/dt"), B), mx.smul(G, B))
    res = mx.ssub(lhs, mx.smul(B, G_pull))
    p = m.p
    return {s / p: mx.stored_lambda(res, s / p) for s in ant.module.window}
