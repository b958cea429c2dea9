"""Multi-variable partial derivatives and the V and W-bar generators."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpqw import wmulti as wm
from rpqw.deform import derivative_product, make_deformation
from rpqw.errors import IndexOrder
from rpqw.operators import BracketSpec, commutator, n_bracket, op_equal
from rpqw.outcome import PASS, SKIPPED


def test_partial_derivative_action(pq):
    D2 = wm.make_Dj(pq, 2, 2)
    e = (3, 4)
    assert D2.action[e] == {(3, 3): derivative_product(pq, 4, 1)}
    with pytest.raises(IndexOrder):
        wm.make_Dj(pq, 3, 2)


@pytest.mark.parametrize("name", ["pq", "qfam", "classical"])
@pytest.mark.parametrize("N", [1, 2, 3])
def test_partials_commute(name, N, request):
    assert wm.verify_Dj_commute(request.getfixturevalue(name), N).status == PASS


def test_display_skipped_classically(classical):
    assert wm.verify_Dj_display(classical, 1, 2).status == SKIPPED


def test_vbar_action_matches_definition(pq):
    m, r = (1, 0), (2, 1)
    V = wm.make_Vbar(pq, m, r)
    e = (2, 3)
    # each factor multiplies by x_j^(m+r-1) first: -(D_1 x_1^2) on x_1^2 gives -[4] x_1^3,
    # and with the pairs swapped -(D_2 x_2^2) on x_2^3 gives -[5] x_2^4
    expected = {
        (3, 3): -derivative_product(pq, 4, 1),
        (2, 4): -derivative_product(pq, 5, 1),
    }
    assert V.action[e] == expected


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-1, 2), min_size=2, max_size=2), st.lists(st.integers(1, 3), min_size=2, max_size=2))
def test_vbar_symmetric_in_pairs(m, r):
    d = make_deformation("pq", "2/3", "1/5")
    assert wm.verify_Vbar_symmetry(d, m, r).status == PASS


@pytest.mark.parametrize("N", [1, 2, 3])
def test_wbar_reduction(pq, N):
    for m, r in itertools.product(range(-1, 2), (1, 2)):
        assert wm.verify_Wbar_reduction(pq, m, r, N).status == PASS


def test_rank_one_v_generators_commute(pq, qfam):
    for d in (pq, qfam):
        assert wm.verify_Vbar_abelian(d, (1, 0), (0, 2)).status == PASS


def test_two_bracket_is_prefactor_times_commutator(pq):
    tuples = [((1, 0), (2, 1)), ((0, 1), (1, 2))]
    ops = [wm.make_Vbar(pq, m, r) for m, r in tuples]
    lhs = n_bracket(ops, BracketSpec(2, "deformed", pq))
    rhs = commutator(*ops) * wm.vbar_bracket_prefactor(pq, tuples)
    assert op_equal(rhs, lhs) is None


def test_multi_bracket_antisymmetry(pq):
    ops = [wm.make_Vbar(pq, m, r) for m, r in (((1, 0), (2, 1)), ((0, 1), (1, 1)), ((1, 1), (1, 2)))]
    assert wm.verify_multi_antisymmetry(ops, {"tuple": 0}).status == PASS


def test_wbar_commutator_classical(classical):
    for m, n, r, s in itertools.product((0, 1), (0, 1), (1, 2), (1, 2)):
        assert wm.verify_Wbar_commutator(classical, m, n, r, s, 2).status == PASS


def test_single_variable_w_bar_is_minus_sign_w(pq):
    # N = 1: W-bar^r_m = (-1)^r D^(r-1) x^(m+r-1)
    op = wm.make_Wbar(pq, 1, 2, 1)
    assert op.action[(3,)] == {(4,): derivative_product(pq, 5, 1)}
