from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from padicde import INF, CoeffField, LaurentSeries, invert
from padicde import matrix as mx
from padicde.errors import NotInvertibleError
from padicde.modular import bezout, is_probable_prime, rational_reconstruction
from padicde.nabla import approximate_reduce, generate_unit_ideal, unimodular_completion

from conftest import Q2

F = Fraction
T = sympy.Symbol("t")

laurent_polys = st.dictionaries(st.integers(-2, 3), st.integers(-5, 5).filter(bool),
                                min_size=1, max_size=4).map(
    lambda d: LaurentSeries(Q2, {k: F(v) for k, v in d.items()}))


def to_sympy(x):
    return sum(sympy.Rational(c.numerator, c.denominator) * T ** k for k, c in x.terms.items())


def sympy_unit_ideal(xs):
    g = sympy.Poly(0, T)
    for x in xs:
        g = sympy.gcd(g, sympy.Poly(sympy.expand(to_sympy(x) * T ** 8), T))
    while g.degree() > 0 and g.eval(0) == 0:      # t is a unit on the annulus
        g = sympy.quo(g, sympy.Poly(T, T))
    return g.degree() == 0


def test_identity_reduces_to_identity():
    I = mx.identity(Q2, 2)
    red = approximate_reduce(I, F(1, 2), F(1))
    assert [list(r) for r in red.U] == I
    assert red.certificate.ok


def test_monomial_diagonal_inverts_exactly():
    t = LaurentSeries.t(Q2)
    M = [[t, LaurentSeries.zero(Q2)], [LaurentSeries.zero(Q2), LaurentSeries.monomial(Q2, 1, -1)]]
    red = approximate_reduce(M, F(1, 2), F(1))
    assert red.U[0][0] == LaurentSeries.monomial(Q2, 1, -1) and red.U[1][1] == t
    assert set(red.certificate.margins.values()) == {INF}


def test_geometric_entry_on_wide_window():
    one, zero = LaurentSeries.constant(Q2, 1), LaurentSeries.zero(Q2)
    geo = invert(LaurentSeries(Q2, {0: F(1), 1: F(-1)}), F(1, 2), F(2), 8)
    red = approximate_reduce([[one, geo], [zero, one]], F(1, 2), F(2))
    assert red.certificate.ok
    assert len(red.certificate.margins) == 7
    assert all(x.exact for row in red.U for x in row)


def test_non_unit_determinant_rejected():
    x = LaurentSeries(Q2, {0: F(2), 1: F(1)})   # dominant term switches at s = 1
    one, zero = LaurentSeries.constant(Q2, 1), LaurentSeries.zero(Q2)
    with pytest.raises(NotInvertibleError):
        approximate_reduce([[x, zero], [zero, one]], F(1, 2), F(2))


def test_reduction_json_reports_margins():
    red = approximate_reduce(mx.identity(Q2, 2), F(1, 2), F(1))
    out = red.to_json()
    assert out["certificate"]["ok"] is True and len(out["certificate"]["margins"]) == 7


@settings(max_examples=40)
@given(st.lists(laurent_polys, min_size=2, max_size=3))
def test_unit_ideal_matches_sympy(xs):
    assert generate_unit_ideal(xs) == sympy_unit_ideal(xs)


@settings(max_examples=40)
@given(st.lists(laurent_polys, min_size=2, max_size=4))
def test_completion_has_unit_determinant(beta):
    assume(generate_unit_ideal(beta))
    A, Ainv = unimodular_completion(beta)
    n = len(beta)
    assert list(A[-1]) == beta
    assert mx.sdet(A) == LaurentSeries.constant(Q2, 1)
    assert mx.smul(A, Ainv) == mx.identity(Q2, n)


def test_completion_over_cyclotomic_field():
    K = CoeffField.cyclotomic(3)
    z = K.zeta()
    beta = [LaurentSeries(K, {0: K.one, 1: z}), LaurentSeries(K, {0: K(2), 2: K.one})]
    A, Ainv = unimodular_completion(beta)
    assert mx.sdet(A) == LaurentSeries.constant(K, 1)
    assert mx.smul(A, Ainv) == mx.identity(K, 2)


@settings(max_examples=30)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=8).filter(lambda a: a[-1]),
       st.lists(st.integers(-20, 20), min_size=2, max_size=8).filter(lambda b: b[-1]))
def test_bezout_matches_sympy(a, b):
    pa = sympy.Poly(list(reversed(a)), T)
    pb = sympy.Poly(list(reversed(b)), T)
    got = bezout([F(c) for c in a], [F(c) for c in b])
    if sympy.gcd(pa, pb).degree() > 0:
        assert got is None
        return
    u, v = got
    s, t_, _ = sympy.gcdex(pa, pb)
    assert [F(str(c)) for c in reversed(sympy.Poly(s, T).all_coeffs())] == u or not u
    lhs = sympy.expand(sympy.Poly(list(reversed([sympy.Rational(str(c)) for c in u])) or [0], T).as_expr() * pa.as_expr()
                       + sympy.Poly(list(reversed([sympy.Rational(str(c)) for c in v])) or [0], T).as_expr() * pb.as_expr())
    assert lhs == 1


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 6))
def test_rational_reconstruction(num, den):
    m = (1 << 61) - 1
    assume(den % m)
    f = F(num, den)
    assert rational_reconstruction(f.numerator * pow(f.denominator, -1, m), m) == f


def test_probable_primes_agree_with_sympy():
    for n in list(range(2, 500)) + [(1 << 61) - 1, (1 << 62) - 57, (1 << 62) - 1]:
        assert is_probable_prime(n) == sympy.isprime(n)
