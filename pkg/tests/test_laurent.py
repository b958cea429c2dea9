"""Laurent polynomials, truncated time series and the (x, t) exponential."""

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpqw.errors import NonzeroConstantTerm, WindowExhausted, WindowMismatch
from rpqw.laurent import (
    LaurentPoly,
    TSeries,
    coefficient_of,
    exp_times_series,
    rescale_times,
    series_exp,
    weight,
)

K, W = 4, 5

fractions = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@st.composite
def tseries(draw, zero_constant=True):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        idx = tuple(draw(st.integers(0, 2)) for _ in range(K))
        terms[idx] = draw(fractions)
    if zero_constant:
        terms.pop((0,) * K, None)
    return TSeries(terms, K, W)


def test_laurent_arithmetic():
    f = LaurentPoly({-1: 2, 3: Fraction(1, 2)}, window=6)
    g = LaurentPoly.monomial(1, -1, window=6)
    assert (f * g).terms == {0: -2, 4: Fraction(-1, 2)}
    assert (f - f) == 0
    assert (f * 3).coefficient(-1) == 6


def test_laurent_window_errors():
    with pytest.raises(WindowExhausted):
        LaurentPoly({13: 1})
    with pytest.raises(WindowMismatch):
        LaurentPoly({0: 1}, 5) + LaurentPoly({0: 1}, 6)


def test_tseries_truncates_by_weight():
    t2 = TSeries.var(2, K, W)
    t3 = TSeries.var(3, K, W)
    assert (t2 * t3).terms == {(0, 1, 1, 0): 1}
    assert (t3 * t3).is_zero()
    assert weight((1, 0, 2, 0)) == 7


def test_tseries_derivative():
    t1 = TSeries.var(1, K, W)
    s = t1 * t1 * t1 + TSeries.var(2, K, W, 5)
    assert s.derivative(1) == t1 * t1 * 3
    assert s.derivative(2) == 5
    assert s.derivative(7).is_zero()


def test_exp_of_time_series_low_orders():
    E = exp_times_series(K, W)
    t1, t2 = TSeries.var(1, K, W), TSeries.var(2, K, W)
    assert E.coefficient(0) == 1
    assert E.coefficient(1) == t1
    assert E.coefficient(2) == t2 * Fraction(1, 2) + t1 * t1 * Fraction(1, 2)


def test_series_exp_rejects_constant_term():
    with pytest.raises(NonzeroConstantTerm):
        series_exp(TSeries.constant(1, K, W))


@settings(max_examples=40, deadline=None)
@given(tseries())
def test_exp_inverse(s):
    assert series_exp(s) * series_exp(-s) == 1


@settings(max_examples=40, deadline=None)
@given(tseries(), tseries())
def test_exp_is_multiplicative(a, b):
    assert series_exp(a + b) == series_exp(a) * series_exp(b)


@settings(max_examples=40, deadline=None)
@given(tseries(), st.integers(1, K))
def test_derivative_leibniz(s, k):
    # d/dt_k exp(s) = s' exp(s) up to the weight lost by differentiating
    lhs = series_exp(s).derivative(k).truncate(W - k)
    rhs = (s.derivative(k) * series_exp(s)).truncate(W - k)
    assert lhs == rhs


def test_rescale_times():
    s = TSeries({(2, 1, 0, 0): 3}, K, W)
    out = rescale_times(s, {1: Fraction(1, 2), 2: 5})
    assert coefficient_of(out, (2, 1)) == Fraction(15, 4)


def test_exp_coefficients_are_bell_over_factorial():
    E = exp_times_series(K, W)
    # all-t1 part of x^k is t1^k/k!
    for k in range(W + 1):
        assert coefficient_of(E.coefficient(k), (k,)) == Fraction(1, factorial(k))
