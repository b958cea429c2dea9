"""Deformed numbers, factorials, binomials and the bracket prefactor."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpqw.deform import (
    bracket_prefactor,
    classical_limit,
    deformed_binomial,
    deformed_factorial,
    deformed_number,
    derivative_coefficient,
    falling_factorial,
    k_eigenvalue,
    load_custom_table,
    make_deformation,
    negative_modes_ok,
    scaled_family,
    vandermonde,
)
from rpqw.errors import IndeterminateAtZero, IndexOrder, NotNormalized, ParameterOrdering, UnsupportedExponent


@st.composite
def pq_pairs(draw):
    """Rationals 0 < q < p <= 1 with small denominators."""
    den = draw(st.integers(2, 9))
    a = draw(st.integers(1, den))
    b = draw(st.integers(1, den))
    p, q = Fraction(max(a, b), den), Fraction(min(a, b), den)
    if p == q:
        q = q / 2
    return p, q


def test_pq_number_small_case():
    d = make_deformation("pq", "1/2", "1/3")
    # (1/4 - 1/9) / (1/2 - 1/3)
    assert deformed_number(d, 2) == Fraction(5, 6)


def test_q_number_small_case():
    d = make_deformation("q", None, "1/3")
    assert deformed_number(d, 3) == Fraction(13, 9)


def test_scaled_q_number():
    d = scaled_family(make_deformation("q", None, "1/3"), 2)
    # 1 + q^2
    assert deformed_number(d, 2) == Fraction(10, 9)


def test_prefactor_at_unit_mode_sum():
    d = make_deformation("pq", "1/2", "1/3")
    # [-2]/[-1] = 1/p + 1/q = 5, halved
    assert bracket_prefactor(d, 1, 2) == Fraction(5, 2)
    assert bracket_prefactor(d, 1, 3) == 1


def test_classical_numbers_are_integers():
    d = classical_limit()
    assert [deformed_number(d, n) for n in range(-3, 5)] == list(range(-3, 5))
    assert deformed_factorial(d, 5) == 120
    assert deformed_binomial(d, 6, 2) == 15


@settings(max_examples=60, deadline=None)
@given(pq_pairs(), st.integers(1, 10))
def test_pq_number_is_geometric_sum(pair, n):
    p, q = pair
    d = make_deformation("pq", p, q)
    assert deformed_number(d, n) == sum(p ** (n - 1 - k) * q**k for k in range(n))


@settings(max_examples=60, deadline=None)
@given(pq_pairs(), st.integers(1, 10))
def test_negative_pq_number(pair, n):
    p, q = pair
    d = make_deformation("pq", p, q)
    assert deformed_number(d, -n) == -deformed_number(d, n) / (p * q) ** n


@settings(max_examples=60, deadline=None)
@given(pq_pairs(), st.integers(1, 8), st.data())
def test_binomial_pascal_and_symmetry(pair, n, data):
    p, q = pair
    d = make_deformation("pq", p, q)
    k = data.draw(st.integers(1, n))
    assert deformed_binomial(d, n, k) == deformed_binomial(d, n, n - k)
    if k < n:
        lhs = deformed_binomial(d, n, k)
        rhs = p**k * deformed_binomial(d, n - 1, k) + q ** (n - k) * deformed_binomial(d, n - 1, k - 1)
        assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(pq_pairs(), st.integers(0, 8), st.integers(0, 8))
def test_falling_factorial_conventions(pair, n, k):
    d = make_deformation("pq", *pair)
    got = falling_factorial(d, n, k)
    if k > n:
        assert got == 0
    else:
        assert got == deformed_factorial(d, n) / deformed_factorial(d, n - k)


def test_custom_table_reproduces_pq():
    p, q = Fraction(2, 3), Fraction(1, 5)
    c = 1 / (p - q)
    custom = make_deformation("custom", p, q, terms=[(1, 0, c), (0, 1, -c)])
    ref = make_deformation("pq", p, q)
    assert [deformed_number(custom, n) for n in range(8)] == [deformed_number(ref, n) for n in range(8)]
    # exponent 1 leaves [-l, l] for l = 0, so negative numbers are unavailable
    assert not negative_modes_ok(custom)
    with pytest.raises(UnsupportedExponent):
        deformed_number(custom, -1)


def test_custom_k_eigenvalue(custom):
    with pytest.raises(IndeterminateAtZero):
        k_eigenvalue(custom, 0)
    p, q = custom.p, custom.q
    # R(u, v) = (u - v)/(p - q) + (u - 1)(v - 1), so K = 1 + (p - q)(p^n - 1)(q^n - 1)/(p^n - q^n)
    n = 2
    expected = 1 + (p - q) * (p**n - 1) * (q**n - 1) / (p**n - q**n)
    assert k_eigenvalue(custom, n) == expected


def test_builtin_k_eigenvalue_is_one(pq, qfam):
    assert k_eigenvalue(pq, 3) == k_eigenvalue(qfam, -2) == 1


def test_scaled_derivative_coefficient(pq):
    d2 = scaled_family(pq, 2)
    p2, q2 = pq.p**2, pq.q**2
    assert derivative_coefficient(d2, 3) == (p2**3 - q2**3) / (p2 - q2)
    assert derivative_coefficient(d2, 0) == 0


def test_vandermonde_two_modes(pq):
    assert vandermonde(pq, (1, 3)) == deformed_number(pq, 3) - deformed_number(pq, 1)
    assert vandermonde(pq, (1, 3), offset=1) == deformed_number(pq, 4) - deformed_number(pq, 2)
    assert vandermonde(pq, (2, 2, 0)) == 0


def test_parameter_errors():
    with pytest.raises(ParameterOrdering):
        make_deformation("pq", "1/5", "2/3")
    with pytest.raises(ParameterOrdering):
        make_deformation("q", "1/2", "1/3")
    with pytest.raises(NotNormalized):
        make_deformation("custom", "2/3", "1/5", terms=[(0, 0, 1)])
    with pytest.raises(NotNormalized):
        make_deformation("custom", "2/3", "1/5", terms=[(-2, 0, 1), (0, 0, -1)], l=1)
    with pytest.raises(IndexOrder):
        deformed_binomial(classical_limit(), 2, 3)


def test_prefactor_custom_zero_mode(custom):
    with pytest.raises(IndeterminateAtZero):
        bracket_prefactor(custom, 0, 2)


def test_load_custom_table(tmp_path):
    path = tmp_path / "table.json"
    path.write_text(json.dumps({"l": 1, "terms": [[1, 0, "3/2"], [0, 1, "-3/2"]]}))
    l, terms = load_custom_table(path)
    assert l == 1
    assert terms == [(1, 0, Fraction(3, 2)), (0, 1, Fraction(-3, 2))]
