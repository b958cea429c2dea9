"""The static catalog of checks and the parameter grid each one runs over.

Every check has an id, a suite (``forced`` identities that hold by
associativity and antisymmetry alone, or ``conformance`` checks of displayed
formulas), one anchor naming the identity it covers, a grid builder and a
runner. ``IN_SCOPE`` lists every identity the verifier covers; the anchors
of the catalog are in bijection with it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import matrix_model as mm
from . import wmulti as wm
from . import wsingle as ws
from .config import RunConfig
from .deform import Deformation, negative_modes_ok, scaled_family
from .laurent import LaurentPoly
from .operators import commutator, n_bracket, nambu_forms, op_equal
from .outcome import PASS, CheckOutcome, compare, first_failure, from_witness

FORCED, CONFORMANCE = "forced", "conformance"

IN_SCOPE = (
    "deformed numbers, factorials and binomials",
    "deformed derivative as a dressed (p,q)-derivative",
    "Fock realization of the deformed oscillator algebra",
    "deformed Leibniz rule",
    "commutator of two first-family generators",
    "rank-two commutator of first-family generators",
    "antisymmetry of the operator n-bracket",
    "n-bracket of first-family generators",
    "generalized Jacobi identity",
    "closed sub-2n-algebra of equal-rank generators",
    "vanishing odd brackets of the sub-2n-algebra generators",
    "cocycle condition of the central extension",
    "skewsymmetry of the central term",
    "central extension of the deformed Virasoro algebra",
    "recursive and closed forms of the second family",
    "rank-two generator of the second family",
    "first commutators of the second family",
    "leading term of second-family commutators",
    "Nambu 3-bracket expansions",
    "3-algebra of ranks one and two",
    "null 3-algebra of the L generators",
    "Bremner identity",
    "Filippov fundamental identity",
    "abelian rank-one generators",
    "Virasoro-Witt pair relations",
    "Virasoro-Witt 3-algebra",
    "rescaled Virasoro-Witt 3-algebra",
    "(2s-1)-brackets of a fixed rank",
    "4-algebra of ranks one and three",
    "vanishing 2s-brackets of a fixed rank",
    "rank structure of the 3-, 4- and 5-brackets",
    "factorization of the scaled toy generators",
    "commuting partial deformed derivatives",
    "partial derivative display",
    "symmetry of the multi-variable generators",
    "antisymmetry of the multi-variable n-bracket",
    "reduction of the multi-variable generators to W-bar",
    "commutator of multi-variable generators",
    "abelian rank-one multi-variable generators",
    "n-bracket of multi-variable generators",
    "commutator of W-bar generators",
    "Bell coefficients",
    "rescaled times",
    "determinant operator product property",
    "base relation of the determinant operators",
    "multi-index recursion of the determinant operators",
    "constraint operators and their r = 2, 3, 4 displays",
    "toy-model integrand expansion",
    "toy-model constraints",
    "toy-model r = 2, 3, 4 examples",
    "q- and (p,q)-specializations of the toy constraints",
)


@dataclass(frozen=True)
class CheckInfo:
    id: str
    suite: str
    anchor: str
    description: str
    grid: Callable[[RunConfig, Deformation], list]
    run: Callable[[RunConfig, Deformation, dict], object]


# ---------------------------------------------------------------------------
# shared grid helpers


def _window(c: RunConfig, d: Deformation):
    return ws.window_for(d, c.window)


def _modes(c: RunConfig, d: Deformation, bound: int | None = None) -> list[int]:
    lo, hi = c.modes
    if bound is not None:
        lo, hi = max(lo, -bound), min(hi, bound)
    if not negative_modes_ok(d):
        lo = max(lo, 0)
    return list(range(lo, hi + 1))


def _rng(c: RunConfig, *tag) -> random.Random:
    return random.Random(":".join(str(x) for x in (c.seed,) + tag))


def _ranks(c: RunConfig, cap: int = 4) -> list[int]:
    return list(range(1, min(c.max_rank, cap) + 1))


def _fold(check_id: str, params: dict, outcomes) -> CheckOutcome:
    return first_failure(check_id, params, outcomes)


def _random_op(c: RunConfig, d: Deformation, rng: random.Random, bound: int, window):
    """A first- or second-family generator with a random mode in [-bound, bound]."""
    lo = -bound if negative_modes_ok(d) else 0
    m = rng.randint(lo, bound)
    if rng.random() < 0.5:
        r = rng.randint(1, c.max_rank)
        return ("W", m, r), ws.make_W(d, m, r, window)
    # the second family needs m + s >= 1
    s_lo = max(1, 1 - m)
    s = rng.randint(s_lo, max(s_lo, min(3, c.max_rank)))
    return ("calW", m, s), ws.make_calW(d, m, s, window=window)


# ---------------------------------------------------------------------------
# forced identities


def _antisymmetry_run(c, d, params):
    n, count = params["arity"], params["tuples"]
    rng = _rng(c, "antisymmetry", n)
    window = _window(c, d)
    bound = max(1, min(c.modes[1], (c.window - 2) // n))
    for _ in range(count):
        labels, ops = zip(*(_random_op(c, d, rng, bound, window) for _ in range(n)))
        base = n_bracket(list(ops))
        # adjacent transpositions generate the symmetric group
        for i in range(n - 1):
            swapped = list(ops)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            wit = op_equal(base * -1, n_bracket(swapped))
            if wit is not None:
                return from_witness("bracket_antisymmetry", params, wit, f"operators {[list(x) for x in labels]}")
    return CheckOutcome("bracket_antisymmetry", params, PASS)


JACOBI_TUPLES = (
    ((1, 2), (-1, 1), (0, 3), (2, 2), (-2, 2), (1, 1), (0, 2)),
    ((0, 1), (1, 2), (-1, 3), (1, 1), (0, 2), (-1, 2), (2, 1)),
)


def _jacobi_grid(c, d):
    return [{"arity": 2, "family": "W"}, {"arity": 2, "family": "calW"}] + [
        {"arity": 4, "family": "W", "tuple": i} for i in range(len(JACOBI_TUPLES))
    ]


def _jacobi_run(c, d, params):
    window = _window(c, d)
    lo = -1 if negative_modes_ok(d) else 0
    if params["arity"] == 2:
        if params["family"] == "W":
            gens = [ws.make_W(d, m, r, window) for m in range(lo, 2) for r in _ranks(c, 3)]
        else:
            gens = [ws.make_calW(d, m, s, window=window) for m in range(lo, 2) for s in _ranks(c, 3) if m + s >= 1]
        for triple in itertools.combinations(range(len(gens)), 3):
            wit = ws.verify_gji([gens[i] for i in triple], 2)
            if wit is not None:
                return from_witness("jacobi_gji", params, wit, f"generators {list(triple)}")
        return CheckOutcome("jacobi_gji", params, PASS, note=f"{len(gens)} generators, all triples")
    spec = JACOBI_TUPLES[params["tuple"]]
    ops = [ws.make_W(d, m if negative_modes_ok(d) else abs(m), min(r, c.max_rank), window) for m, r in spec]
    return from_witness("jacobi_gji", params, ws.verify_gji(ops, 4))


def _nambu_run(c, d, params):
    rng = _rng(c, "nambu")
    window = _window(c, d)
    bound = max(1, min(c.modes[1], (c.window - 2) // 6))
    for _ in range(params["triples"]):
        labels, ops = zip(*(_random_op(c, d, rng, bound, window) for _ in range(3)))
        left, right = nambu_forms(*ops)
        wit = op_equal(left, right)
        if wit is not None:
            return from_witness("nambu_forms", params, wit, f"operators {[list(x) for x in labels]}")
    return CheckOutcome("nambu_forms", params, PASS)


def _abelian_run(c, d, params):
    window = _window(c, d)
    # the second-family rank-one generators -D^m exist for m >= 0 only
    modes = [m for m in _modes(c, d, 4) if m >= 0] if params["generator"] != "W1" else _modes(c, d, 4)
    make = {
        "W1": lambda m: ws.make_W(d, m, 1, window),
        "calW1": lambda m: ws.make_calW(d, m, 1, window=window),
        "R": lambda m: ws.make_R(d, m, window),
    }[params["generator"]]
    outcomes = []
    for n, m in itertools.product(modes, repeat=2):
        got = commutator(make(n), make(m))
        outcomes.append(compare("abelian_pairs", {**params, "n": n, "m": m}, got.zero_like(), got))
    return _fold("abelian_pairs", {**params, "modes": [min(modes), max(modes)]}, outcomes)


def _calw_rc_grid(c, d):
    return [{"m": m, "s": s} for s in _ranks(c) for m in _modes(c, d, 3) if m >= 1 - s]


def _vbar_symmetry_grid(c, d):
    if negative_modes_ok(d):
        cases = [((1, 0), (2, 1)), ((1, -1), (2, 2)), ((0, 2), (1, 3)), ((1, 0, -1), (2, 1, 1)), ((0, 1, 1), (1, 2, 3))]
    else:
        cases = [((1, 0), (2, 1)), ((0, 2), (1, 3)), ((0, 1, 1), (1, 2, 3))]
    return [{"m": list(m), "r": list(r)} for m, r in cases]


DET_GRID = (
    [(m, (x,)) for m in range(1, 5) for x in (1, 2, 3)]
    + [(m, xs) for m in range(1, 4) for xs in ((1, 2), (2, 3))]
    + [(m, (1, 2, 3)) for m in range(1, 4)]
)


# ---------------------------------------------------------------------------
# conformance grids


def _leibniz_grid(c, d):
    return [{"r": r, "case": i} for r in _ranks(c, 3) for i in range(3)]


def _leibniz_run(c, d, params):
    rng = _rng(c, "leibniz", params["r"], params["case"])
    lo = -3 if negative_modes_ok(d) else 0

    def poly():
        return LaurentPoly({rng.randint(lo, 4): Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4)) for _ in range(3)}, 16)

    out = ws.verify_leibniz(d, params["r"], poly(), poly())
    out.params = {**params, **out.params}
    return out


def _pair_grid(c, d):
    ms = _modes(c, d)
    return [
        {"m": m, "n": n, "r": r, "s": s}
        for r in _ranks(c)
        for s in _ranks(c)
        for m in ms
        for n in ms
        # the truncated falling factorial departs from the operator product when m + r - 1 < 0
        if m + r - 1 >= 0 and n + s - 1 >= 0
    ]


def _n_algebra_grid(c, d):
    grid = []
    for n in (3, 4):
        if n > c.max_arity:
            continue
        for ranks in itertools.combinations_with_replacement(_ranks(c, 3), n):
            # keep m + r - 1 >= 0 for every slot, where the truncated falling factorial is faithful
            modes = [i % 3 for i in range(n)]
            for reading in ("cyclic", "truncated"):
                grid.append({"modes": modes, "ranks": list(ranks), "lambda_reading": reading})
    return grid


def _sub2n_tuples(d: Deformation, n: int, size: int) -> list:
    lo = -2 if negative_modes_ok(d) else 0
    return list(itertools.combinations(range(lo, lo + 5), size))


def _central_scan(c, d, n):
    lo = -3 if negative_modes_ok(d) else 0
    return list(range(lo, lo + (7 if n == 1 else 8)))


def _first_comm_grid(c, d):
    grid = []
    for case in ws.FIRST_COMMUTATORS[1:]:
        s, r = int(case[0]), int(case[1])
        for n, m in itertools.product(range(0, 3), repeat=2):
            if n >= 1 - s and m >= 1 - r:
                grid.append({"case": case, "n": n, "m": m})
    return grid


def _leading_grid(c, d):
    return [
        {"s": s, "r": r, "n": n, "m": m}
        for s in _ranks(c, 3)
        for r in _ranks(c, 3)
        for n in range(0, 3)
        for m in range(0, 3)
        # the leading generator W^(s+r-2) needs rank >= 1
        if s + r >= 3
    ]


def _triples(d, count_lo=-1):
    lo = count_lo if negative_modes_ok(d) else 0
    return [list(t) for t in itertools.combinations(range(lo, lo + 4), 3)]


def _three_algebra_grid(c, d):
    return [{"case": case, "modes": t} for case in ws.THREE_ALGEBRA_CASES for t in _triples(d, 0)]


BREMNER_SPECS = (
    ((2, 0), (2, 1), (1, 2), (2, 2), (1, 0), (2, 3), (1, 1)),
    ((1, 1), (2, 0), (2, 1), (1, 0), (2, 2), (1, 2), (2, 3)),
)

FILIPPOV_SPECS = (
    ((2, 0), (1, 2), (2, 0), (2, 1), (2, 2)),
    ((2, 0), (2, 1), (2, 2), (1, 0), (1, 1)),
    ((2, 1), (2, 2), (2, 0), (2, 3), (1, 1)),
    ((2, 0), (1, 1), (2, 2), (1, 0), (2, 1)),
)

NU_VALUES = ("0", "1/3")


def _vw_pair_grid(c, d):
    ms = _modes(c, d, 2)
    return [
        {"case": case, "n": n, "m": m, "nu": nu}
        for case in ("FF", "FR")
        for nu in NU_VALUES
        for n in ms
        for m in ms
        if n >= 0 and m >= 0
    ]


def _vw3_grid(c, d):
    return [{"case": case, "modes": t, "nu": nu} for case in ws.VW3_CASES for nu in NU_VALUES for t in _triples(d, 0)]


def _multibracket_grid(c, d):
    grid = [{"s": 2}]
    if c.max_arity >= 5:
        grid.append({"s": 3})
    return grid


def _multibracket_tuples(d, s):
    lo = 2 - s if negative_modes_ok(d) else 0
    return list(itertools.combinations(range(lo, lo + 2 * s), 2 * s - 1))


def _four_algebra_grid(c, d):
    tuples = [list(t) for t in itertools.combinations(range(0, 5), 4)][:3]
    return [{"case": case, "modes": t} for case in ws.FOUR_ALGEBRA_CASES for t in tuples]


def _vanishing_grid(c, d):
    grid = []
    for s in (2, 3):
        if 2 * s > c.max_arity:
            continue
        lo = 1 - s
        for t in itertools.combinations(range(max(lo, 0), max(lo, 0) + 2 * s + 1), 2 * s):
            grid.append({"s": s, "modes": list(t)})
    return grid[:8]


CONJECTURE_CASES = (
    ((1, 2, 3), (0, 1, 2)),
    ((2, 2, 3), (1, 0, 2)),
    ((3, 3, 2), (0, 1, 1)),
    ((2, 3, 3, 2), (0, 1, 2, 0)),
    ((3, 3, 3, 3), (0, 1, 2, 3)),
    ((2, 2, 3, 2, 2), (0, 1, 2, 0, 1)),
    ((3, 2, 3, 2, 3), (0, 1, 2, 1, 0)),
)


def _conjecture_grid(c, d):
    return [
        {"ranks": list(r), "modes": list(m)}
        for r, m in CONJECTURE_CASES
        if len(r) <= c.max_arity and max(r) <= c.max_rank
    ]


def _toy_fact_grid(c, d):
    return [
        {"a": a, "m": m, "r": r}
        for a in sorted({a for a, _ in c.toy})
        for m in _modes(c, d, 3)
        for r in range(2, c.max_rank + 1)
        if m >= 0
    ]


def _dj_display_grid(c, d):
    return [{"j": j, "N": N} for N in (1, 2, 3) for j in range(1, N + 1)]


def _wbar_reduction_grid(c, d):
    return [{"m": m, "r": r, "N": N} for N in (2, 3) for r in _ranks(c, 3) for m in range(0, 3)]


VBAR_PAIRS = (
    ((1, 0), (1, 1), (0, 1), (2, 1)),
    ((1, 0), (2, 1), (0, 1), (2, 1)),
    ((1, 1), (2, 2), (1, 0), (1, 2)),
    ((0, 1), (2, 1), (1, 0), (1, 1)),
    ((2, 0), (2, 1), (0, 1), (1, 2)),
)


def _vbar_comm_grid(c, d):
    return [
        {"m": list(m), "r": list(r), "n": list(n), "s": list(s), "rank_reading": reading}
        for m, r, n, s in VBAR_PAIRS
        for reading in ("literal", "shifted")
    ]


def _vbar_abelian_grid(c, d):
    pairs = [((1, 0), (0, 1)), ((1, 1), (2, 0)), ((0, 2), (1, 1))]
    if negative_modes_ok(d):
        pairs.append(((1, -1), (-1, 2)))
    return [{"m": list(m), "n": list(n)} for m, n in pairs]


VBAR_BRACKETS = (
    (((1, 0), (2, 1)), ((0, 1), (1, 2))),
    (((1, 0), (2, 1)), ((0, 1), (2, 1)), ((1, 1), (1, 2))),
    (((1, 0), (1, 2)), ((0, 1), (2, 1)), ((1, 1), (2, 1))),
    (((1, 0), (2, 1)), ((0, 1), (1, 2)), ((1, 1), (2, 2)), ((0, 0), (2, 1))),
)


def _wbar_comm_grid(c, d):
    return [
        {"m": m, "n": n, "r": r, "s": s, "N": N}
        for N in (2,)
        for r in _ranks(c, 3)
        for s in _ranks(c, 3)
        for m in range(0, 2)
        for n in range(0, 2)
    ]


def _wtilde_grid(c, d):
    return [
        {"m": m, "N": N, "W": min(c.t_order, 6), "r": r, "sign": sign}
        for m, N in ((0, 1), (3, 1), (1, 2), (2, 3))
        for r in (2, 3, 4)
        for sign in mm.WTILDE_SIGNS
    ]


def _toy_grid(c, d, ranks):
    return [
        {"a": a, "gamma": g, "m": m, "r": r, "K": c.t_order, "W": c.t_order}
        for a, g in c.toy
        for m in range(0, 3)
        for r in ranks
    ]


def _toy_args(params):
    return params["a"], params["gamma"], params["m"], params["r"], params["K"], params["W"]


MULTI_INDEX_GRID = (((1, 2), (1, 2)), ((2, 1), (2, 3)), ((1, 1, 2), (1, 2, 3)), ((2, 2), (1, 3)))


# ---------------------------------------------------------------------------
# the catalog


def _info(id, suite, anchor, description, grid, run):
    return CheckInfo(id, suite, anchor, description, grid, run)


CATALOG: tuple[CheckInfo, ...] = (
    # forced
    _info(
        "fock_relations", FORCED, IN_SCOPE[2], "A A^dagger = [N+1], A^dagger A = [N], [N, A] = -A, [N, A^dagger] = A^dagger",
        lambda c, d: [{}], lambda c, d, p: ws.verify_fock(d, _window(c, d)),
    ),
    _info(
        "bracket_antisymmetry", FORCED, IN_SCOPE[6], "swapping two arguments negates the n-bracket",
        lambda c, d: [{"arity": n, "tuples": 10} for n in range(2, c.max_arity + 1)], _antisymmetry_run,
    ),
    _info("jacobi_gji", FORCED, IN_SCOPE[8], "Jacobi identity and the plain even-arity GJI", _jacobi_grid, _jacobi_run),
    _info(
        "nambu_forms", FORCED, IN_SCOPE[18], "the two expansions of the Nambu 3-bracket agree",
        lambda c, d: [{"triples": 50}], _nambu_run,
    ),
    _info(
        "abelian_pairs", FORCED, IN_SCOPE[23], "rank-one generators commute",
        lambda c, d: [{"generator": g} for g in ("W1", "calW1", "R")], _abelian_run,
    ),
    _info(
        "dj_commute", FORCED, IN_SCOPE[32], "[D_i, D_j] = 0",
        lambda c, d: [{"N": N} for N in (1, 2, 3)], lambda c, d, p: wm.verify_Dj_commute(d, p["N"]),
    ),
    _info(
        "calw_recursive_closed", FORCED, IN_SCOPE[14], "the commutator recursion reproduces the closed sum",
        _calw_rc_grid, lambda c, d, p: ws.verify_calw_recursive_closed(d, p["m"], p["s"], _window(c, d)),
    ),
    _info(
        "vbar_symmetry", FORCED, IN_SCOPE[34], "permuting the variables leaves the generator unchanged",
        _vbar_symmetry_grid, lambda c, d, p: wm.verify_Vbar_symmetry(d, p["m"], p["r"]),
    ),
    _info(
        "bell_oracle", FORCED, IN_SCOPE[41], "series exponentiation against the Bell recursion",
        lambda c, d: [{"K": 8}], lambda c, d, p: mm.verify_bell_oracle(p["K"]),
    ),
    _info(
        "det_property", FORCED, IN_SCOPE[43], "the determinant operator multiplies E by prod x_j^m",
        lambda c, d: [{"m": m, "x": list(xs), "W": 8} for m, xs in DET_GRID],
        lambda c, d, p: mm.verify_det_property(p["m"], len(p["x"]), p["x"], p["W"]),
    ),
    # conformance, single variable
    _info(
        "deformed_numbers", CONFORMANCE, IN_SCOPE[0], "[n] = R(p^n, q^n), factorial recursion, Pascal rule",
        lambda c, d: [{"nmax": 8}], lambda c, d, p: ws.verify_deformed_numbers(d, p["nmax"]),
    ),
    _info(
        "derivative_definition", CONFORMANCE, IN_SCOPE[1], "D = D_pq (p - q)/(P - Q) R(P, Q)",
        lambda c, d: [{}], lambda c, d, p: ws.verify_derivative_definition(d, _window(c, d)),
    ),
    _info("leibniz", CONFORMANCE, IN_SCOPE[3], "r-th derivative of a product", _leibniz_grid, _leibniz_run),
    _info(
        "pair_commutator", CONFORMANCE, IN_SCOPE[4], "[W^r_m, W^s_n] as the displayed K-dressed sum",
        _pair_grid, lambda c, d, p: ws.verify_pair_commutator(d, p["m"], p["n"], p["r"], p["s"], _window(c, d)),
    ),
    _info(
        "pair_commutator_r2s2", CONFORMANCE, IN_SCOPE[5], "[W^2_m, W^2_n]",
        lambda c, d: [{"m": m, "n": n} for m in _modes(c, d) for n in _modes(c, d) if m + 1 >= 0 and n + 1 >= 0],
        lambda c, d, p: ws.verify_pair_commutator_r2s2(d, p["m"], p["n"], _window(c, d)),
    ),
    _info(
        "n_algebra", CONFORMANCE, IN_SCOPE[7], "n-bracket of W generators as the displayed multi-sum",
        _n_algebra_grid,
        lambda c, d, p: ws.verify_n_algebra(d, p["modes"], p["ranks"], _window(c, d), p["lambda_reading"]),
    ),
    _info(
        "sub2n_closure", CONFORMANCE, IN_SCOPE[9], "2n-bracket of W^(n+1) is a Vandermonde multiple of W^(n+1)",
        lambda c, d: [{"n": n} for n in (1, 2) if 2 * n <= c.max_arity],
        lambda c, d, p: ws.verify_sub2n_closure(d, p["n"], _sub2n_tuples(d, p["n"], 2 * p["n"]), _window(c, d)),
    ),
    _info(
        "sub2n_vanishing", CONFORMANCE, IN_SCOPE[10], "(2n+1)-brackets of W^(n+1) vanish",
        lambda c, d: [{"n": n} for n in (1, 2) if 2 * n + 1 <= c.max_arity],
        lambda c, d, p: ws.verify_sub2n_vanishing(d, p["n"], _sub2n_tuples(d, p["n"], 2 * p["n"] + 1), _window(c, d)),
    ),
    _info(
        "central_cocycle", CONFORMANCE, IN_SCOPE[11], "scalar GJI condition on the central term",
        lambda c, d: [{"n": n} for n in (1, 2)],
        lambda c, d, p: ws.verify_cocycle(d, p["n"], _central_scan(c, d, p["n"])),
    ),
    _info(
        "central_skew", CONFORMANCE, IN_SCOPE[12], "the central term is skewsymmetric",
        lambda c, d: [{"n": n} for n in (1, 2)],
        lambda c, d, p: ws.verify_central_skew(d, p["n"], list(range(-2, 3)) if negative_modes_ok(d) else list(range(0, 4))),
    ),
    _info(
        "central_virasoro", CONFORMANCE, IN_SCOPE[13], "central term of the pair (m, -m)",
        lambda c, d: [{"m": m} for m in range(1, 5)],
        lambda c, d, p: ws.verify_central_virasoro(d, p["m"]),
    ),
    _info(
        "calw_w2_display", CONFORMANCE, IN_SCOPE[15], "W^2_m = x D^(m+1) + (m+1)/2 D^m",
        lambda c, d: [{"m": m} for m in _modes(c, d) if m >= 0],
        lambda c, d, p: ws.verify_calw_w2_display(d, p["m"], _window(c, d)),
    ),
    _info(
        "calw_first_commutators", CONFORMANCE, IN_SCOPE[16], "the listed commutators of ranks up to three",
        _first_comm_grid,
        lambda c, d, p: ws.verify_first_commutators_calW(d, p["case"], p["n"], p["m"], _window(c, d)),
    ),
    _info(
        "calw_leading", CONFORMANCE, IN_SCOPE[17], "leading term ([n(r-1)] - [m(s-1)]) W^(s+r-2)",
        _leading_grid, lambda c, d, p: ws.verify_calw_leading(d, p["s"], p["r"], p["n"], p["m"], _window(c, d)),
    ),
    _info(
        "calw_3algebra", CONFORMANCE, IN_SCOPE[19], "3-brackets of W^1 and W^2",
        _three_algebra_grid, lambda c, d, p: ws.verify_3algebra(d, p["case"], p["modes"], _window(c, d)),
    ),
    _info(
        "l_null_3algebra", CONFORMANCE, IN_SCOPE[20], "[L_k, L_n, L_m] = 0",
        lambda c, d: [{"modes": t} for t in _triples(d)], lambda c, d, p: ws.verify_L_null(d, p["modes"], _window(c, d)),
    ),
    _info(
        "bremner", CONFORMANCE, IN_SCOPE[21], "Bremner identity for the 3-bracket of W generators",
        lambda c, d: [{"ops": [list(x) for x in s]} for s in BREMNER_SPECS],
        lambda c, d, p: ws.verify_bremner(d, [tuple(x) for x in p["ops"]], _window(c, d)),
    ),
    _info(
        "filippov", CONFORMANCE, IN_SCOPE[22], "the fundamental identity fails somewhere on the scan",
        lambda c, d: [{"tuples": len(FILIPPOV_SPECS)}],
        lambda c, d, p: ws.verify_filippov(d, FILIPPOV_SPECS, _window(c, d)),
    ),
    _info(
        "virasoro_witt_pair", CONFORMANCE, IN_SCOPE[24], "[F_n, F_m] and [F_n, R_m]",
        _vw_pair_grid, lambda c, d, p: ws.verify_virasoro_witt_pair(d, p["case"], p["n"], p["m"], Fraction(p["nu"]), _window(c, d)),
    ),
    _info(
        "virasoro_witt_3algebra", CONFORMANCE, IN_SCOPE[25], "3-brackets of F and R",
        _vw3_grid, lambda c, d, p: ws.verify_virasoro_witt_3algebra(d, p["case"], p["modes"], Fraction(p["nu"]), _window(c, d)),
    ),
    _info(
        "virasoro_witt_hat", CONFORMANCE, IN_SCOPE[26], "3-brackets of the rescaled F and R, exactly in Q(s)",
        _vw3_grid, lambda c, d, p: ws.verify_virasoro_witt_hat(d, p["case"], p["modes"], Fraction(p["nu"]), _window(c, d)),
    ),
    _info(
        "multibracket", CONFORMANCE, IN_SCOPE[27], "(2s-1)-bracket of W^s is a Vandermonde multiple of W^1",
        _multibracket_grid, lambda c, d, p: ws.verify_multibracket(d, p["s"], _multibracket_tuples(d, p["s"]), _window(c, d)),
    ),
    _info(
        "calw_4algebra", CONFORMANCE, IN_SCOPE[28], "4-brackets of W^3 and W^1",
        _four_algebra_grid, lambda c, d, p: ws.verify_4algebra_W3(d, p["case"], p["modes"], _window(c, d)),
    ),
    _info(
        "vanishing_2s", CONFORMANCE, IN_SCOPE[29], "2s-bracket of W^s vanishes",
        _vanishing_grid, lambda c, d, p: ws.verify_vanishing_2s(d, p["s"], p["modes"], _window(c, d)),
    ),
    _info(
        "conjecture_structure", CONFORMANCE, IN_SCOPE[30], "top rank of 3-, 4- and 5-brackets",
        _conjecture_grid, lambda c, d, p: ws.verify_conjecture_structure(d, p["ranks"], p["modes"], _window(c, d)),
    ),
    _info(
        "toy_factorization", CONFORMANCE, IN_SCOPE[31], "-D^(r-1) x^(m+r-1) as a product of T generators",
        _toy_fact_grid,
        lambda c, d, p: ws.verify_toy_factorization(scaled_family(d, p["a"]), p["m"], p["r"], _window(c, d)),
    ),
    # conformance, several variables
    _info(
        "dj_display", CONFORMANCE, IN_SCOPE[33], "D_j as the displayed difference operator",
        _dj_display_grid, lambda c, d, p: wm.verify_Dj_display(d, p["j"], p["N"]),
    ),
    _info(
        "multi_bracket_antisymmetry", FORCED, IN_SCOPE[35], "swapping two multi-variable generators negates the bracket",
        lambda c, d: [{"N": N, "arity": n} for N in (2, 3) for n in (2, 3)],
        lambda c, d, p: _multi_antisymmetry(c, d, p),
    ),
    _info(
        "wbar_reduction", CONFORMANCE, IN_SCOPE[36], "W-bar as a specialization of the multi-variable generator",
        _wbar_reduction_grid, lambda c, d, p: wm.verify_Wbar_reduction(d, p["m"], p["r"], p["N"]),
    ),
    _info(
        "vbar_commutator", CONFORMANCE, IN_SCOPE[37], "commutator of two multi-variable generators",
        _vbar_comm_grid,
        lambda c, d, p: wm.verify_Vbar_commutator(d, p["m"], p["r"], p["n"], p["s"], rank_reading=p["rank_reading"]),
    ),
    _info(
        "vbar_abelian", CONFORMANCE, IN_SCOPE[38], "rank-one multi-variable generators commute",
        _vbar_abelian_grid, lambda c, d, p: wm.verify_Vbar_abelian(d, p["m"], p["n"]),
    ),
    _info(
        "vbar_nbracket", CONFORMANCE, IN_SCOPE[39], "closure of the multi-variable n-bracket",
        lambda c, d: [{"tuples": [[list(m), list(r)] for m, r in t]} for t in VBAR_BRACKETS if len(t) <= c.max_arity],
        lambda c, d, p: wm.verify_Vbar_nbracket(d, [(m, r) for m, r in p["tuples"]]),
    ),
    _info(
        "wbar_commutator", CONFORMANCE, IN_SCOPE[40], "commutator of W-bar generators",
        _wbar_comm_grid, lambda c, d, p: wm.verify_Wbar_commutator(d, p["m"], p["n"], p["r"], p["s"], p["N"]),
    ),
    # conformance, times and moments
    _info(
        "rescaled_times", CONFORMANCE, IN_SCOPE[42], "Bell coefficients at t_k -> (q^(ak) - p^(ak)) t_k",
        lambda c, d: [{"a": a, "K": c.t_order} for a in sorted({a for a, _ in c.toy})],
        lambda c, d, p: mm.verify_rescaled_times(d, p["a"], p["K"]),
    ),
    _info(
        "det_base", CONFORMANCE, IN_SCOPE[44], "the one-index operator is m! d/dt_m",
        lambda c, d: [{"m": m, "x": [1, 2], "W": c.t_order} for m in range(1, 5)],
        lambda c, d, p: mm.verify_det_base(p["m"], p["x"], p["W"]),
    ),
    _info(
        "multi_index_det", CONFORMANCE, IN_SCOPE[45], "the recursion gives the symmetrized monomial",
        lambda c, d: [{"m": list(ms), "x": list(xs), "W": c.t_order} for ms, xs in MULTI_INDEX_GRID],
        lambda c, d, p: mm.verify_multi_index(p["m"], p["x"], p["W"]),
    ),
    _info(
        "wtilde_specialization", CONFORMANCE, IN_SCOPE[46], "general constraint operator against the r = 2, 3, 4 displays",
        _wtilde_grid, lambda c, d, p: mm.verify_Wtilde_specializations(d, p["m"], p["N"], p["W"], p["r"], p["sign"]),
    ),
    _info(
        "toy_integrand", CONFORMANCE, IN_SCOPE[47], "printed moment expansion of the toy integrand",
        lambda c, d: _toy_grid(c, d, (1, 2, 3)), lambda c, d, p: mm.verify_toy_integrand(d, *_toy_args(p)),
    ),
    _info(
        "toy_duality", CONFORMANCE, IN_SCOPE[48], "t-space constraint against the x-space oracle",
        lambda c, d: _toy_grid(c, d, (1, 2, 3)), lambda c, d, p: mm.verify_toy_duality(d, *_toy_args(p)),
    ),
    _info(
        "toy_examples", CONFORMANCE, IN_SCOPE[49], "general toy operator against the r = 2, 3, 4 examples",
        lambda c, d: _toy_grid(c, d, (2, 3, 4)), lambda c, d, p: mm.verify_toy_form(d, *_toy_args(p), form="example"),
    ),
    _info(
        "toy_remark", CONFORMANCE, IN_SCOPE[50], "general toy operator against the family specializations",
        lambda c, d: _toy_grid(c, d, (2, 3)), lambda c, d, p: mm.verify_toy_form(d, *_toy_args(p), form="remark"),
    ),
)


def _multi_antisymmetry(c, d, params):
    N, n = params["N"], params["arity"]
    rng = _rng(c, "multi-antisymmetry", N, n)
    lo = -1 if negative_modes_ok(d) else 0
    outcomes = []
    for _ in range(3):
        specs = [([rng.randint(lo, 1) for _ in range(N)], [rng.randint(1, 2) for _ in range(N)]) for _ in range(n)]
        outcomes.append(wm.verify_multi_antisymmetry([wm.make_Vbar(d, m, r) for m, r in specs], params))
    return _fold("multi_bracket_antisymmetry", params, outcomes)


BY_ID = {info.id: info for info in CATALOG}


def list_checks(suite: str = "all") -> list[CheckInfo]:
    return [info for info in CATALOG if suite == "all" or info.suite == suite]
