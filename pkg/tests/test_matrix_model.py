"""Bell coefficients, determinant operators, constraint operators and the toy model."""

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpqw import matrix_model as mm
from rpqw.deform import make_deformation
from rpqw.errors import DivisionByZeroMode, IndexOrder, PoleHit
from rpqw.laurent import TSeries
from rpqw.outcome import FAIL, PASS


def t(k, K=6, W=6, c=1):
    return TSeries.var(k, K, W, c)


def test_low_bell_coefficients():
    B = mm.bell_coefficients(6, 6)
    assert B[0] == 1
    assert B[1] == t(1)
    assert B[2] == t(2) + t(1) * t(1)
    assert B[3] == t(3) + t(1) * t(2) * 3 + t(1) * t(1) * t(1)


@settings(max_examples=8, deadline=None)
@given(st.integers(1, 8))
def test_bell_series_matches_recursion(K):
    assert mm.bell_coefficients(K) == mm.bell_recursion(K)


def test_det_operator_two_by_two():
    op = mm.det_operator(1, 2, 6, 6)
    # det [[d1, 1], [2 d2, d1]] / 2
    assert {k: v.constant_term() for k, v in op.terms.items()} == {(1, 1): Fraction(1, 2), (2,): -1}


def test_det_operator_size_one():
    op = mm.det_operator(3, 1, 6, 6)
    assert {k: v.constant_term() for k, v in op.terms.items()} == {(3,): factorial(3)}


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 3), st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=3), min_size=1, max_size=2))
def test_det_property(m, xs):
    assert mm.verify_det_property(m, len(xs), xs, 5).status == PASS


def test_multi_index_and_base_relation():
    assert mm.verify_multi_index((1, 2), (1, 3), 6).status == PASS
    assert mm.verify_det_base(2, (2,), 6).status == PASS
    with pytest.raises(IndexOrder):
        mm.verify_det_base(0, (1,), 6)


def test_rescaled_times(pq, qfam):
    for d in (pq, qfam):
        for a in (1, 2):
            assert mm.verify_rescaled_times(d, a, 5).status == PASS


def test_moment_derivative():
    z = mm.MomentExpr.moment(0, 4, 4)
    # d/dt_2 M_0 = M_2 / 2!
    out = z.derivative(2)
    assert out.coefficient(2) == Fraction(1, 2)
    assert out.coefficient(0).is_zero()


def test_wtilde_rank_two_matches_display(pq):
    for m, N in ((0, 1), (1, 2), (2, 1)):
        got = mm.make_Wtilde(pq, m, 2, N, 5)
        assert got == mm.wtilde_display(pq, m, 2, N, 5)
        # the two sign readings differ by (-1)^(r-1)
        assert mm.make_Wtilde(pq, m, 2, N, 5, sign="literal") == got * -1


def test_wtilde_singular_classically(classical):
    with pytest.raises(DivisionByZeroMode):
        mm.make_Wtilde(classical, 0, 2, 1, 5)


def test_theta_value():
    d = make_deformation("q", None, "1/3")
    # R(1, 0) = 3/2, G = 3, F(1) = -2 and F(1/3) = -2/7: (1 + 6)(1 + 6/7)
    assert mm.theta_eval(d, 1, 1) == 13
    assert mm.theta_eval(d, 1, 0) == 1
    with pytest.raises(PoleHit):
        mm.theta_eval(d, 0, 1)


def test_toy_rank_one_scalar(pq):
    out = mm.verify_toy_duality(pq, 1, 0, 0, 1, 6, 6)
    assert out.status == PASS
    # the general operator at r = 1 carries the partial exponential sum over k = 1..K
    assert out.data["scalar"] == sum(Fraction(1, factorial(k)) for k in range(1, 7)) == Fraction(1237, 720)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_toy_slice_zero(pq, r):
    for a in (1, 2):
        out = mm.verify_toy_duality(pq, a, 1, 1, r, 6, 6)
        assert out.data["slice_zero"] == PASS
        assert out.status in (PASS, FAIL)


def test_xspace_oracle_rank_one(pq):
    # r = 1: x^(m+gamma) E / (x^gamma E) is the single moment M_m
    expr = mm.xspace_expansion(pq, 1, 0, 2, 1, 4, 4)
    assert set(expr.terms) == {2}
    assert expr.coefficient(2) == 1
