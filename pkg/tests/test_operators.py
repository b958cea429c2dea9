"""Graded operators, composition on shrinking domains and the n-bracket."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpqw.errors import WindowExhausted
from rpqw.operators import (
    BracketSpec,
    GradedOperator,
    antisymmetrized_product,
    commutator,
    compose,
    gji_sum,
    n_bracket,
    nambu_forms,
    op_equal,
    op_from_action,
    permutation_sign,
)

WINDOW = (-10, 10)
small = st.fractions(min_value=-2, max_value=2, max_denominator=3)


@st.composite
def graded_ops(draw):
    """Random operators z^n -> c(n) z^(n+shift) with polynomial c."""
    shift = draw(st.integers(-2, 2))
    coeffs = [draw(small) for _ in range(3)]
    return op_from_action(lambda n: [(n + shift, coeffs[0] + coeffs[1] * n + coeffs[2] * n * n)], WINDOW, mode=shift)


def _brute_product(ops):
    """sum over all permutations with explicit signs, no memoization."""
    total = None
    for perm in itertools.permutations(range(len(ops))):
        term = ops[perm[0]]
        for i in perm[1:]:
            term = term @ ops[i]
        term = term * permutation_sign(perm)
        total = term if total is None else total + term
    return total


def test_compose_shrinks_domain():
    up = op_from_action(lambda n: [(n + 3, 1)], (-5, 5))
    down = op_from_action(lambda n: [(n - 1, n)], (-5, 5))
    out = compose(up, down)
    assert out.window == (-4, 5)
    assert out.apply(2) == {4: 2}
    with pytest.raises(WindowExhausted):
        compose(op_from_action(lambda n: [(n + 9, 1)], (0, 3)), op_from_action(lambda n: [(n + 9, 1)], (0, 3)))


def test_arity_two_bracket_is_commutator():
    a = op_from_action(lambda n: [(n + 1, n)], WINDOW, mode=1)
    b = op_from_action(lambda n: [(n - 2, 1)], WINDOW, mode=-2)
    assert op_equal(commutator(a, b), n_bracket([a, b])) is None


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((2, 0, 1)) == 1


def test_bracket_spec_alpha():
    assert BracketSpec(4).alpha == 1
    assert BracketSpec(3).alpha == 0
    with pytest.raises(ValueError):
        BracketSpec(1)


@settings(max_examples=15, deadline=None)
@given(st.lists(graded_ops(), min_size=2, max_size=4))
def test_memoized_product_matches_permutation_sum(ops):
    assert op_equal(_brute_product(ops), antisymmetrized_product(ops)) is None


@settings(max_examples=15, deadline=None)
@given(st.lists(graded_ops(), min_size=3, max_size=4), st.data())
def test_bracket_antisymmetry(ops, data):
    i, j = sorted(data.draw(st.lists(st.integers(0, len(ops) - 1), min_size=2, max_size=2, unique=True)))
    swapped = list(ops)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert op_equal(n_bracket(ops) * -1, n_bracket(swapped)) is None


@settings(max_examples=15, deadline=None)
@given(graded_ops(), graded_ops(), graded_ops())
def test_nambu_expansions_agree(a, b, c):
    left, right = nambu_forms(a, b, c)
    assert op_equal(left, right) is None
    assert op_equal(left, n_bracket([a, b, c])) is None


@settings(max_examples=10, deadline=None)
@given(graded_ops(), graded_ops(), graded_ops())
def test_jacobi(a, b, c):
    total = gji_sum([a, b, c], BracketSpec(2), BracketSpec(2))
    assert op_equal(total.zero_like(), total) is None


def test_op_equal_reports_smallest_mode():
    a = op_from_action(lambda n: [(n, 1)], (-3, 3))
    b = op_from_action(lambda n: [(n, 2 if abs(n) >= 2 else 1)], (-3, 3))
    wit = op_equal(a, b)
    assert (wit.mode, wit.target, wit.expected, wit.got) == (-2, -2, 1, 2)


def test_empty_domain():
    with pytest.raises(WindowExhausted):
        GradedOperator(2, 1, {})
    assert op_from_action(lambda n: [(n, 0)], (0, 2)).is_zero()
    assert (op_from_action(lambda n: [(n, 1)], (0, 2)) * Fraction(3)).apply(1) == {1: 3}
