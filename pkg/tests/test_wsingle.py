"""One-variable generators, their brackets and the central term."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpqw import wsingle as ws
from rpqw.catalog import BREMNER_SPECS, FILIPPOV_SPECS
from rpqw.deform import bracket_prefactor, deformed_number, derivative_product, make_deformation, vandermonde
from rpqw.errors import DegenerateRecursion, IndexOrder, NegativeArgument, WindowExhausted
from rpqw.laurent import LaurentPoly
from rpqw.operators import commutator, n_bracket, op_equal, permutation_sign
from rpqw.outcome import FAIL, PASS, SKIPPED

WIN = (-8, 8)


def _brute_bracket(ops):
    total = None
    for perm in itertools.permutations(range(len(ops))):
        term = ops[perm[0]]
        for i in perm[1:]:
            term = term @ ops[i]
        term = term * permutation_sign(perm)
        total = term if total is None else total + term
    return total


def test_w_generator_action(pq):
    op = ws.make_W(pq, 2, 3, WIN)
    # z^(m+r-1) D^(r-1) on z^5: [5][4] z^7
    assert op.apply(5) == {7: deformed_number(pq, 5) * deformed_number(pq, 4)}
    assert op.mode == 2
    with pytest.raises(IndexOrder):
        ws.make_W(pq, 0, 0, WIN)


@pytest.mark.parametrize("name", ["pq", "qfam", "custom", "classical"])
def test_fock_relations(name, request):
    d = request.getfixturevalue(name)
    assert ws.verify_fock(d).status == PASS


@pytest.mark.parametrize("name", ["pq", "qfam", "custom"])
def test_numbers_and_derivative_definition(name, request):
    d = request.getfixturevalue(name)
    assert ws.verify_deformed_numbers(d).status == PASS
    assert ws.verify_derivative_definition(d).status == PASS


def test_derivative_definition_skips_classical(classical):
    assert ws.verify_derivative_definition(classical).status == SKIPPED


@settings(max_examples=25, deadline=None)
@given(
    st.integers(1, 3),
    st.dictionaries(st.integers(-3, 3), st.integers(-3, 3), max_size=3),
    st.dictionaries(st.integers(-3, 3), st.integers(-3, 3), max_size=3),
)
def test_leibniz_rule(r, f, g):
    d = make_deformation("pq", "2/3", "1/5")
    out = ws.verify_leibniz(d, r, LaurentPoly(f, 12), LaurentPoly(g, 12))
    assert out.status == PASS


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_calw_recursive_equals_closed_classically(classical, s):
    for m in range(max(-3, 1 - s), 4):
        assert ws.verify_calw_recursive_closed(classical, m, s, WIN).status == PASS


def test_calw_rank_one_is_minus_power_of_d(pq):
    op = ws.make_calW(pq, 3, 1, window=WIN)
    assert op.apply(5) == {2: -derivative_product(pq, 5, 3)}
    assert ws.verify_calw_recursive_closed(pq, 2, 1, WIN).status == PASS


def test_calw_recursion_guards(pq):
    with pytest.raises(NegativeArgument):
        ws.make_calW_closed(pq, -3, 2, WIN)
    with pytest.raises(DegenerateRecursion):
        ws.make_calW_recursive(pq, -2, 2, WIN)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(1, 3), st.integers(1, 3))
def test_two_bracket_display_matches_pair_commutator(m, n, r, s):
    # the truncated n-bracket display at n = 2 is the pair commutator display times the prefactor
    for d in (make_deformation("pq", "2/3", "1/5"), make_deformation("q", None, "1/3")):
        window = ws.window_for(d)
        lhs = ws.n_algebra_display(d, (m, n), (r, s), window, "truncated")
        rhs = ws.pair_commutator_display(d, m, n, r, s, window) * bracket_prefactor(d, m + n, 2)
        assert op_equal(rhs, lhs) is None


def test_pair_commutator_classical_domain(classical):
    for m, n, r, s in itertools.product(range(0, 3), range(0, 3), (1, 2, 3), (1, 2, 3)):
        assert ws.verify_pair_commutator(classical, m, n, r, s, WIN).status == PASS


def test_pair_commutator_rank_one(pq):
    # [z^m, z^n] = 0 regardless of the deformation
    assert ws.verify_pair_commutator(pq, 1, -2, 1, 1, WIN).status == PASS


def test_sub2n_classical_ratios(classical):
    pairs = list(itertools.product(range(-2, 3), repeat=2))
    quads = list(itertools.combinations(range(-2, 3), 4))
    one = ws.verify_sub2n_closure(classical, 1, pairs, WIN)
    two = ws.verify_sub2n_closure(classical, 2, quads, WIN)
    assert (one.status, two.status) == (PASS, PASS)
    # oracle: brute permutation sum of the plain 4-bracket at one tuple
    modes = (-1, 0, 1, 2)
    ops = [ws.make_W(classical, m, 3, WIN) for m in modes]
    target = ws.make_W(classical, sum(modes), 3, WIN)
    bracket = _brute_bracket(ops)
    n0 = next(n for n in bracket.domain() if target.action.get(n))
    lam = bracket.apply(n0).get(n0 + sum(modes), 0) / target.apply(n0)[n0 + sum(modes)]
    assert lam / vandermonde(classical, modes, 1) == two.data["ratio"] == 2
    assert one.data["ratio"] == 1


def test_multibracket_needs_a_visible_target(classical):
    # W^1 of mode 10 is -D^10, which vanishes on every z^n the window can reach
    with pytest.raises(WindowExhausted):
        ws.verify_multibracket(classical, 3, [(0, 1, 2, 3, 4)], WIN)


def test_multibracket_classical_ratios(classical):
    out2 = ws.verify_multibracket(classical, 2, list(itertools.combinations(range(0, 4), 3)), WIN)
    out3 = ws.verify_multibracket(classical, 3, list(itertools.combinations(range(-1, 5), 5)), (-12, 12))
    assert out2.status == out3.status == PASS
    # oracle: recursive generators and a brute permutation sum
    for s, modes, ratio in ((2, (0, 1, 3), out2.data["ratio"]), (3, (-1, 0, 1, 2, 3), out3.data["ratio"])):
        ops = [ws.make_calW_recursive(classical, m, s, (-12, 12)) for m in modes]
        target = ws.make_calW_recursive(classical, sum(modes), 1, (-12, 12))
        bracket = _brute_bracket(ops)
        n0 = next(n for n in bracket.domain() if target.action.get(n))
        (t, c), = target.apply(n0).items()
        lam = bracket.apply(n0).get(t, 0) / c
        assert lam / vandermonde(classical, modes) == ratio
    assert (out2.data["ratio"], out3.data["ratio"]) == (Fraction(1, 4), Fraction(7, 32))


def test_odd_brackets_vanish_classically(classical):
    triples = list(itertools.combinations(range(-2, 3), 3))
    assert ws.verify_sub2n_vanishing(classical, 1, triples, WIN).status == PASS


def test_central_virasoro_display_value():
    d = make_deformation("pq", "1/2", "1/3")
    # (p/q)^2 [2]/[4] [1][2][3] / 12 with [2] = 5/6, [3] = 19/36, [4] = 65/216
    assert ws.central_virasoro_display(d, 2) == Fraction(95, 416)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2, unique=True))
def test_central_term_skew(modes):
    d = make_deformation("q", None, "1/3")
    assert ws.central_C(d, modes) == -ws.central_C(d, modes[::-1])


def test_bremner_holds_and_filippov_fails(pq, classical):
    for d in (pq, classical):
        assert ws.verify_bremner(d, BREMNER_SPECS[0], WIN).status == PASS
        assert ws.verify_filippov(d, FILIPPOV_SPECS, WIN).status == PASS


def test_toy_factorization_rank_two(pq, classical):
    for d in (pq, classical):
        for m in range(0, 3):
            assert ws.verify_toy_factorization(d, m, 2, WIN).status == PASS


def test_rank_one_generators_commute(pq):
    a, b = ws.make_calW(pq, 1, 1, window=WIN), ws.make_calW(pq, 3, 1, window=WIN)
    c = commutator(a, b)
    assert op_equal(c.zero_like(), c) is None


def test_bracket_of_l_generators_classical(classical):
    # classical Witt relation [L_m, L_n] = (m - n) L_(m+n)
    for m, n in itertools.product(range(-2, 3), repeat=2):
        lhs = n_bracket([ws.make_L(classical, m, WIN), ws.make_L(classical, n, WIN)])
        assert op_equal(ws.make_L(classical, m + n, WIN) * (m - n), lhs) is None


def test_pair_commutator_deformed_mismatch_is_reported(pq):
    out = ws.verify_pair_commutator(pq, 1, 2, 2, 3, WIN)
    assert out.status in (PASS, FAIL)
    if out.status == FAIL:
        assert set(out.witness) == {"mode", "target", "expected", "got"}
