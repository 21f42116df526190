from fractions import Fraction

import pytest

from padicde import INF, CoeffField, LaurentSeries
from padicde.errors import HypothesisError, PreconditionError
from padicde.nabla import (THETA, NablaModule, antecedent_residual, artin_schreier_module, constant_module,
                           frobenius_antecedent, frobenius_structure_iterate, pullback,
                           radius_relation, trivial_module)
from padicde.nabla.frobenius import Antecedent

from conftest import Q2

F = Fraction
WINDOW = (F(1, 8), F(1, 2))
BASE_WINDOW = (F(1, 4), F(1))


def round_trip(C, order=32):
    f = constant_module(Q2, C, THETA, BASE_WINDOW)
    m = pullback(f, "frobenius")
    return f, m, frobenius_antecedent(m, order, WINDOW)


def test_structure_iterate_scales_by_p():
    steps = frobenius_structure_iterate(constant_module(Q2, [[F(1)]]), 4)
    assert [s.matrix[0][0] for s in steps] == [LaurentSeries.constant(Q2, 2 ** l) for l in range(5)]
    assert [s.lam_fixed for s in steps] == [0, 1, 2, 3, 4]


def test_structure_iterate_of_zero():
    steps = frobenius_structure_iterate(constant_module(Q2, [[F(0)]]), 3)
    assert all(s.matrix[0][0].is_zero() for s in steps)


def test_structure_iterate_needs_shrinking_windows():
    m = NablaModule(Q2, [[LaurentSeries.monomial(Q2, 1, -1)]], THETA, (F(1, 8), F(1, 4)))
    steps = frobenius_structure_iterate(m, 4, F(1, 4))
    assert [s.lam_fixed for s in steps] == [l - F(2 ** l, 4) for l in range(5)]
    assert all(s.lam_shrunk == l - F(1, 4) for l, s in enumerate(steps))


def test_structure_iterate_requires_theta_form():
    with pytest.raises(PreconditionError):
        frobenius_structure_iterate(trivial_module(Q2), 1)


@pytest.mark.parametrize("C", [[[0]], [[1]], [[2]], [[-1]], [[0, 1], [0, 0]], [[1, 1], [0, 1]],
                               [[0, 0], [1, 0]], [[2, 1], [0, 2]]])
def test_constant_round_trips(C):
    f, m, ant = round_trip(C)
    assert ant.module.matrix == f.matrix
    assert ant.module.window == BASE_WINDOW
    assert set(antecedent_residual(m, ant).values()) == {INF}
    assert radius_relation(ant.module, m, WINDOW)[0]


def test_half_is_not_its_own_antecedent():
    f, m, ant = round_trip([[F(1, 2)]])
    assert ant.module.matrix[0][0].is_zero()
    assert radius_relation(ant.module, m, WINDOW)[0]
    holds, rows = radius_relation(f, m, WINDOW)
    assert not holds and all(not ok for *_, ok in rows)


def test_artin_schreier_round_trip_within_precision():
    f = artin_schreier_module(Q2, 1, 1, BASE_WINDOW).to_theta()
    m = pullback(f, "frobenius")
    ant = frobenius_antecedent(m, 32, WINDOW)
    assert ant.module.matrix == f.matrix
    residual = antecedent_residual(m, ant)
    assert all(residual[s] > 16 for s in WINDOW)


def test_small_radius_rejected():
    m = pullback(artin_schreier_module(Q2, 1, 3, BASE_WINDOW).to_theta(), "frobenius")
    with pytest.raises(HypothesisError):
        frobenius_antecedent(m, 16, WINDOW)


def test_antecedent_over_cyclotomic_field():
    K = CoeffField.cyclotomic(3)
    f = constant_module(K, [[K(2)]], THETA, BASE_WINDOW)
    m = pullback(f, "frobenius")
    ant = frobenius_antecedent(m, 24, (F(1, 12), F(1, 3)))
    assert ant.module.matrix == f.matrix


def test_antecedent_json_has_evidence():
    _, _, ant = round_trip([[0, 1], [0, 0]])
    out = ant.to_json()
    assert set(out) == {"module", "basis", "precision", "selected"}
    assert isinstance(ant, Antecedent) and len(out["selected"]) == 2
