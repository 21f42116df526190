from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from padicde.errors import PreconditionError
from padicde.ramification import (BreakData, HerbrandFn, PiecewiseLinear, artin_schreier_phi,
                                  closed_form_bound, compose, compose_phi, hasse_arf_polygon,
                                  highest_break_combine, phi_from_lower, phi_non_galois, psi)

F = Fraction
points = st.builds(F, st.integers(0, 300), st.integers(1, 30))
as_params = st.tuples(st.integers(1, 6), st.sampled_from([2, 3, 5])).filter(lambda dp: dp[0] % dp[1])


def integrated_phi(orders, u):
    """φ(u) = ∫_0^u |G_⌈x⌉| / |G_0| dx, integrated by sympy."""
    x = sympy.Symbol("x")
    pieces = [(sympy.Rational(orders[i], orders[0]), x <= i) for i in range(1, len(orders))]
    pieces.append((sympy.Rational(orders[-1], orders[0]), True))
    return F(str(sympy.integrate(sympy.Piecewise(*pieces), (x, 0, sympy.Rational(str(u))))))


def test_lower_filtration_integrates_step_function():
    f = phi_from_lower([4, 2, 2, 1])
    for u in (F(1, 2), F(1), F(5, 2), F(3), F(7)):
        assert f(u) == integrated_phi([4, 2, 2, 1], u)
    assert f.final_slope == F(1, 4)


def test_trivial_group_gives_identity():
    assert phi_from_lower([1]) == HerbrandFn.identity()


@pytest.mark.parametrize("d,p", [(1, 2), (3, 2), (1, 3), (2, 3), (5, 2)])
def test_artin_schreier_matches_lower_filtration(d, p):
    assert artin_schreier_phi(d, p) == phi_from_lower([p] * (d + 1) + [1])


def test_artin_schreier_values():
    f = artin_schreier_phi(3, 2)
    assert f(5) == 4 and f(3) == 3
    assert artin_schreier_phi(1, 5)(1) == 1


def test_psi_examples():
    assert psi(HerbrandFn.identity()) == HerbrandFn.identity()
    g = psi(artin_schreier_phi(3, 2))
    assert g.vertices == ((0, 0), (3, 3)) and g.final_slope == 2 and g(4) == 5
    f = phi_from_lower([4, 2, 2, 1])
    assert psi(f)(f(F(5, 2))) == F(5, 2)


def test_composition_examples():
    f = artin_schreier_phi(3, 2)
    assert compose(HerbrandFn.identity(), f) == f
    assert compose_phi(artin_schreier_phi(1, 2), f)(5) == F(5, 2)


def test_non_galois_phi_is_composition_with_psi():
    top_base = compose_phi(artin_schreier_phi(1, 2), artin_schreier_phi(3, 2))
    top_mid = artin_schreier_phi(3, 2)
    h = phi_non_galois(top_base, top_mid)
    assert h == compose(top_base, psi(top_mid))


def test_highest_break_combine():
    assert highest_break_combine(3, 5) == 5
    assert highest_break_combine(0, 0) == 0
    assert highest_break_combine(F(7, 2), F(7, 2)) == F(7, 2)


def test_hasse_arf_examples():
    assert hasse_arf_polygon(BreakData([(1, 1), (2, 2)])).vertices == ((0, 0), (1, 1), (2, 3), (3, 5))
    assert hasse_arf_polygon(BreakData([])).vertices == ((0, 0),)
    assert hasse_arf_polygon(BreakData([(3, 1)])).vertices == ((0, 0), (1, 3))


def test_closed_form_bounds():
    assert closed_form_bound("abelian-image", p=2, n=1, ell=3) == 8
    assert closed_form_bound("frob-break", p=2, s_eps=1) == 1
    assert closed_form_bound("frobenius-order", q=2, d=1) == 1
    with pytest.raises(PreconditionError):
        closed_form_bound("full-image", p=2, n=1, ell_prime=3)
    with pytest.raises(PreconditionError):
        closed_form_bound("abelian-image", p=0, n=1, ell=3)


def test_rejects_non_monotone_orders():
    with pytest.raises(PreconditionError):
        phi_from_lower([2, 4, 1])


def test_json_round_trip():
    f = compose_phi(artin_schreier_phi(1, 3), artin_schreier_phi(2, 3))
    assert PiecewiseLinear.from_json(f.to_json()) == f
    b = BreakData([(F(7, 2), 1), (2, 3)])
    assert BreakData.from_json(b.to_json()) == b


@given(as_params, points)
def test_psi_inverts_phi(dp, u):
    f = artin_schreier_phi(*dp)
    assert psi(f)(f(u)) == u and f(psi(f)(u)) == u


@given(as_params, as_params, as_params, points)
def test_composition_is_associative(a, b, c, u):
    fa, fb, fc = (artin_schreier_phi(*x) for x in (a, b, c))
    assert compose(compose(fa, fb), fc)(u) == compose(fa, compose(fb, fc))(u)


@given(as_params, as_params)
def test_composition_preserves_herbrand_shape(a, b):
    h = compose_phi(artin_schreier_phi(*a), artin_schreier_phi(*b))
    assert h(0) == 0 and h.is_concave()
    assert all(s > 0 for s in h.slopes())


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(1, 3)), max_size=4))
def test_hasse_arf_integral_and_total_rise(entries):
    poly = hasse_arf_polygon(BreakData(entries))
    slopes = [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(poly.vertices, poly.vertices[1:])]
    assert slopes == sorted(slopes)
    assert poly.vertices[-1][1] == sum(b * m for b, m in entries)
    assert poly.integral and all(F(x).denominator == F(y).denominator == 1 for x, y in poly.vertices)
