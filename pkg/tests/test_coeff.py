from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from padicde import CoeffField, field_arith
from padicde.coeff import round_rational, vp_rational
from padicde.errors import FieldMismatchError, NotInvertibleError

from conftest import small_rationals


def test_rational_addition():
    assert field_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)


def test_degree_one_eisenstein_pi_squared():
    K = CoeffField.pi_adjoined(2)
    assert field_arith(K.pi(), K.pi(), "mul") == 4


def test_cyclotomic_relation_reduces_to_one():
    K = CoeffField.cyclotomic(3)
    z = K.zeta()
    assert field_arith(z, z ** 2, "mul") == K.one


@pytest.mark.parametrize("field,x,expected", [
    (CoeffField.rationals(2), Fraction(2), 1),
    (CoeffField.pi_adjoined(3), None, Fraction(1, 2)),
    (CoeffField.cyclotomic(5), "1-zeta", Fraction(1, 4)),
])
def test_valuation_examples(field, x, expected):
    if x is None:
        x = field.gen
    elif x == "1-zeta":
        x = 1 - field.zeta()
    assert field.valuation(x) == expected


def test_valuation_matches_sympy_resultant():
    K = CoeffField.cyclotomic(5)
    X = sympy.Symbol("X")
    phi = sympy.Poly(sum(X ** i for i in range(5)), X)
    for coeffs in ([1, -1], [3, 0, 2], [1, 1, 1, 5], [2, 4]):
        elem = K(list(map(Fraction, coeffs)))
        poly = sympy.Poly(sum(c * X ** i for i, c in enumerate(coeffs)), X)
        norm = sympy.resultant(phi, poly)
        assert K.valuation(elem) == Fraction(sympy.multiplicity(5, abs(norm)), 4)


def test_division_by_zero_is_explicit():
    K = CoeffField.cyclotomic(3)
    with pytest.raises(NotInvertibleError):
        field_arith(K.one, K.zero, "div")
    with pytest.raises(ZeroDivisionError):
        field_arith(Fraction(1), Fraction(0), "div")


def test_field_mismatch_rejected():
    with pytest.raises(FieldMismatchError):
        field_arith(CoeffField.cyclotomic(3).zeta(), CoeffField.cyclotomic(5).zeta(), "add")


def test_field_descriptor_round_trip():
    for K in (CoeffField.rationals(3), CoeffField.cyclotomic(5), CoeffField.pi_adjoined(3)):
        assert CoeffField.from_json(K.to_json()) == K


@given(small_rationals, small_rationals)
def test_rational_valuation_is_multiplicative(x, y):
    assert vp_rational(x * y, 2) == vp_rational(x, 2) + vp_rational(y, 2)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=2).filter(any),
       st.lists(st.integers(-6, 6), min_size=2, max_size=2).filter(any))
def test_extension_valuation_laws(a, b):
    K = CoeffField.cyclotomic(3)
    x, y = K(list(map(Fraction, a))), K(list(map(Fraction, b))) * 3
    vx, vy = K.valuation(x), K.valuation(y)
    assert K.valuation(x * y) == vx + vy
    assert (vx * 2).denominator == 1 and (vy * 2).denominator == 1
    s = x + y
    if s:
        assert K.valuation(s) >= min(vx, vy)
        if vx != vy:
            assert K.valuation(s) == min(vx, vy)


@given(small_rationals)
def test_base_field_consistency(c):
    K = CoeffField.pi_adjoined(3)
    assert K.valuation(K(c)) == vp_rational(c, 3)


@given(small_rationals, st.integers(0, 6))
def test_rounding_is_congruent(x, m):
    r = round_rational(x, 2, m)
    assert r == 0 or vp_rational(r, 2) >= min(vp_rational(x, 2), m)
    assert x == r or vp_rational(x - r, 2) >= m
