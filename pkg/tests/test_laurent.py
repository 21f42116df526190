from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from padicde import INF, CoeffField, LaurentSeries, hensel_lift, hensel_steps, invert
from padicde.errors import HypothesisError, NotInvertibleError, ParseError

from conftest import Q2, exact_series, log_radii

F = Fraction
Q3 = CoeffField.rationals(3)


def lam(x, s):
    return x.gauss_norm(s).lam


def test_gauss_norm_examples():
    assert lam(LaurentSeries.t(Q2), F(1, 2)) == F(1, 2)
    x = LaurentSeries(Q2, {0: F(2), -1: F(1)})
    assert lam(x, F(1, 3)) == F(-1, 3)
    assert lam(LaurentSeries.zero(Q2), F(1)) == INF
    assert x.gauss_norm(F(1, 3)).exact


def test_derivative_examples():
    t2 = LaurentSeries.monomial(Q2, 1, 2)
    assert t2.derivative("d/dt") == LaurentSeries.monomial(Q2, 2, 1)
    assert LaurentSeries.monomial(Q2, 1, -3).derivative("t d/dt") == LaurentSeries.monomial(Q2, -3, -3)
    cubic = LaurentSeries(Q2, {i: F(1) for i in range(4)})
    assert cubic.derivative() == LaurentSeries(Q2, {0: F(1), 1: F(2), 2: F(3)})


def test_residue_examples():
    assert LaurentSeries.monomial(Q2, 1, -1).residue() == 1
    assert LaurentSeries.constant(Q2, 1).residue() == 0
    assert LaurentSeries(Q2, {-1: F(3), 2: F(5)}).residue() == 3


def test_substitution_examples():
    x = LaurentSeries(Q2, {1: F(1), -1: F(1)})
    assert x.substitute_power(3) == LaurentSeries(Q2, {3: F(1), -3: F(1)})
    assert LaurentSeries.constant(Q2, 1).substitute_power(5) == LaurentSeries.constant(Q2, 1)
    y = LaurentSeries(Q2, {0: F(2), -1: F(1)})
    assert lam(y.substitute_power(2), F(1, 3)) == lam(y, F(2, 3)) == F(-2, 3)


def test_frobenius_twist_examples():
    assert LaurentSeries.t(Q2).frobenius_twist() == LaurentSeries.monomial(Q2, 1, 2)
    x = LaurentSeries(Q3, {0: F(3), -1: F(1)})
    assert x.frobenius_twist() == LaurentSeries(Q3, {0: F(3), -3: F(1)})
    y = LaurentSeries(Q2, {0: F(2), -1: F(1)})
    assert lam(y.frobenius_twist(), F(1, 4)) == lam(y, F(1, 2)) == F(-1, 2)


def test_invert_geometric_series():
    x = LaurentSeries(Q2, {0: F(1), 1: F(-1)})
    y = invert(x, F(1, 4), F(2), 8)
    assert (x * y.as_exact() - LaurentSeries.constant(Q2, 1)) == LaurentSeries.monomial(Q2, -1, 9)


def test_invert_monomial_is_exact():
    y = invert(LaurentSeries.monomial(Q2, 1, 2), F(1, 4), F(1), 4)
    assert y.exact and y == LaurentSeries.monomial(Q2, 1, -2)


def test_invert_small_perturbation_of_one():
    x = LaurentSeries(Q2, {0: F(1), -1: F(2)})
    y = invert(x, F(1, 4), F(3, 4), 6)
    assert [y.coefficient(-k) for k in range(4)] == [1, -2, 4, -8]
    # each further term gains λ = 1 - s, i.e. 3/4 at s = 1/4
    residual = x * y.as_exact() - LaurentSeries.constant(Q2, 1)
    assert lam(residual, F(1, 4)) >= 7 * F(3, 4)


def test_invert_rejects_non_units():
    x = LaurentSeries(Q2, {0: F(2), 1: F(1)})
    with pytest.raises(NotInvertibleError):
        invert(x, F(1, 2), F(2), 4)   # dominant term changes at s = 1


def test_hensel_quadratic_against_binomial_series():
    P = [LaurentSeries(Q2, {-1: F(2)}), LaurentSeries.constant(Q2, -1), LaurentSeries.constant(Q2, 1)]
    z = hensel_lift(P, 32, F(1, 4), F(3, 4))
    u = sympy.Symbol("u")
    oracle = sympy.series((1 + sympy.sqrt(1 - 8 * u)) / 2, u, 0, 7).removeO()
    for k in range(7):
        assert z.coefficient(-k) == F(str(oracle.coeff(u, k)))


def test_hensel_linear_is_one_step():
    P = [LaurentSeries.constant(Q2, -1), LaurentSeries.constant(Q2, 1)]
    steps = hensel_steps(P, 4, F(1, 4), F(1, 2))
    assert steps[0].z == LaurentSeries.constant(Q2, 1)
    assert steps[0].residual_lo == INF


def test_hensel_mixed_quadratic_against_oracle():
    P = [LaurentSeries(Q3, {2: F(3)}), LaurentSeries(Q3, {0: F(-1), 1: F(3)}),
         LaurentSeries.constant(Q3, 1)]
    z = hensel_lift(P, 8, F(1, 4), F(1, 2))
    t = sympy.Symbol("t")
    b = -1 + 3 * t
    oracle = sympy.series((-b + sympy.sqrt(b ** 2 - 12 * t ** 2)) / 2, t, 0, 4).removeO()
    for k in range(4):
        assert z.coefficient(k) == F(str(oracle.coeff(t, k)))
    residual = sum((c * z.as_exact() ** i for i, c in enumerate(P)), LaurentSeries.zero(Q3))
    assert lam(residual, F(1, 4)) > 8 * F(1, 4)


def test_hensel_rejects_bad_hypothesis():
    P = [LaurentSeries.constant(Q2, 1), LaurentSeries.constant(Q2, -1), LaurentSeries.constant(Q2, 1)]
    with pytest.raises(HypothesisError):
        hensel_lift(P, 4, F(1, 4), F(1, 2))


def test_series_json_round_trip():
    x = invert(LaurentSeries(Q2, {0: F(1), -1: F(2)}), F(1, 4), F(3, 4), 5)
    for y in (x, LaurentSeries(Q2, {-2: F(3, 4), 5: F(1)})):
        assert LaurentSeries.from_json(Q2, y.to_json()).to_json() == y.to_json()
    K = CoeffField.cyclotomic(3)
    z = LaurentSeries(K, {1: K.zeta()})
    assert LaurentSeries.from_json(K, z.to_json()) == z


def test_series_json_rejects_garbage():
    with pytest.raises(ParseError):
        LaurentSeries.from_json(Q2, {"coeffs": {"x": "1"}})


@given(exact_series(), exact_series(), log_radii)
def test_ultrametric(x, y, s):
    lx, ly = lam(x, s), lam(y, s)
    assert lam(x + y, s) >= min(lx, ly)
    if lx != ly:
        assert lam(x + y, s) == min(lx, ly)


@given(exact_series(), exact_series(), log_radii)
def test_multiplicative(x, y, s):
    assert lam(x * y, s) == lam(x, s) + lam(y, s)


@given(exact_series(), log_radii, log_radii, st.integers(0, 8))
def test_hadamard_log_convexity(x, a, b, w8):
    c = F(w8, 8)
    assert lam(x, c * a + (1 - c) * b) >= c * lam(x, a) + (1 - c) * lam(x, b)


@given(exact_series(lo=0), log_radii, log_radii)
def test_monotone_for_power_series(x, a, b):
    assume(a != b)
    a, b = min(a, b), max(a, b)
    assert lam(x, a) <= lam(x, b)


@given(exact_series())
def test_residue_of_derivative_vanishes(x):
    assert x.derivative("d/dt").residue() == 0


@given(exact_series(), exact_series(), st.integers(1, 4))
def test_substitution_is_ring_map(x, y, n):
    assert (x * y).substitute_power(n) == x.substitute_power(n) * y.substitute_power(n)
    assert (x + y).frobenius_twist() == x.frobenius_twist() + y.frobenius_twist()
    assert (x * y).frobenius_twist() == x.frobenius_twist() * y.frobenius_twist()
