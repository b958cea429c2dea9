"""Graded linear operators on Laurent monomials and their brackets.

An operator is stored extensionally: for every mode n of its domain
[lo, hi] it records the image of z^n as a sparse map target -> coefficient.
Composition shrinks the domain so that every intermediate image stays inside
the next operator's domain; an empty domain raises ``WindowExhausted``.

The same code serves one and several variables: modes are ints for
``GradedOperator`` and exponent tuples for ``MultiGradedOperator``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .deform import Deformation, bracket_prefactor
from .errors import WindowExhausted

Action = dict  # mode -> {target: coefficient}


class GradedOperator:
    """Operator on span{z^n : lo <= n <= hi}."""

    __slots__ = ("lo", "hi", "action", "smin", "smax", "mode")

    def __init__(self, lo: int, hi: int, action: Action, mode=None):
        if lo > hi:
            raise WindowExhausted(f"empty domain [{lo}, {hi}]")
        self.lo, self.hi, self.mode = lo, hi, mode
        self.action = {n: {t: c for t, c in action.get(n, {}).items() if c != 0} for n in range(lo, hi + 1)}
        shifts = [t - n for n, img in self.action.items() for t in img]
        self.smin = min(shifts, default=0)
        self.smax = max(shifts, default=0)

    @property
    def window(self) -> tuple[int, int]:
        return self.lo, self.hi

    def domain(self):
        return range(self.lo, self.hi + 1)

    def apply(self, n: int) -> dict:
        return self.action[n]

    def _restricted(self, lo: int, hi: int) -> "GradedOperator":
        return GradedOperator(lo, hi, self.action, self.mode)

    def restrict(self, lo: int, hi: int) -> "GradedOperator":
        return self._restricted(max(lo, self.lo), min(hi, self.hi))

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        return compose(self, other)

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        out = {}
        for n in range(lo, hi + 1):
            img = dict(self.action[n])
            for t, c in other.action[n].items():
                img[t] = img.get(t, 0) + c
            out[n] = img
        return GradedOperator(lo, hi, out, _merge_mode(self.mode, other.mode))

    def __neg__(self) -> "GradedOperator":
        return self * -1

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def __mul__(self, c) -> "GradedOperator":
        c = Fraction(c)
        return GradedOperator(
            self.lo, self.hi, {n: {t: c * v for t, v in img.items()} for n, img in self.action.items()}, self.mode
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.action.values())

    def zero_like(self) -> "GradedOperator":
        return GradedOperator(self.lo, self.hi, {}, self.mode)

    def __repr__(self) -> str:
        return f"GradedOperator([{self.lo}, {self.hi}], shift [{self.smin}, {self.smax}], mode={self.mode})"


def _merge_mode(a, b):
    return a if a == b else None


def op_from_action(
    f: Callable[[int], Iterable[tuple[int, Fraction]]], window: int | tuple[int, int] = 12, mode=None
) -> GradedOperator:
    lo, hi = (-window, window) if isinstance(window, int) else window
    action = {}
    for n in range(lo, hi + 1):
        img: dict[int, Fraction] = {}
        for t, c in f(n):
            img[t] = img.get(t, 0) + Fraction(c)
        action[n] = img
    return GradedOperator(lo, hi, action, mode)


def compose(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """The product a b, i.e. apply b first."""
    lo = max(b.lo, a.lo - b.smin)
    hi = min(b.hi, a.hi - b.smax)
    if lo > hi:
        raise WindowExhausted(f"composition leaves no valid modes (a on [{a.lo}, {a.hi}], b on [{b.lo}, {b.hi}])")
    out = {}
    aact = a.action
    for n in range(lo, hi + 1):
        img: dict[int, Fraction] = {}
        for t, c in b.action[n].items():
            for t2, c2 in aact[t].items():
                img[t2] = img.get(t2, 0) + c * c2
        out[n] = img
    return GradedOperator(lo, hi, out)


def commutator(a, b):
    return a @ b - b @ a


@dataclass(frozen=True)
class BracketSpec:
    arity: int
    prefactor: str = "plain"  # "plain" or "deformed"
    deformation: Deformation | None = None

    def __post_init__(self):
        if self.arity < 2:
            raise ValueError("bracket arity must be at least 2")
        if self.prefactor not in ("plain", "deformed"):
            raise ValueError(f"unknown prefactor mode {self.prefactor!r}")

    @property
    def alpha(self) -> int:
        return (1 + (-1) ** self.arity) // 2


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def antisymmetrized_product(ops: Sequence):
    """sum over sigma of sgn(sigma) O_sigma(1) ... O_sigma(n).

    Expanded along the leftmost factor with memoization on the remaining
    index set, so the cost is n 2^(n-1) compositions instead of n! n.
    """
    memo: dict[tuple, object] = {}

    def rest(idx: tuple):
        if len(idx) == 1:
            return ops[idx[0]]
        if idx in memo:
            return memo[idx]
        total = None
        for j, i in enumerate(idx):
            term = ops[i] @ rest(idx[:j] + idx[j + 1 :])
            if j % 2:
                term = -term
            total = term if total is None else total + term
        memo[idx] = total
        return total

    return rest(tuple(range(len(ops))))


def total_mode(ops: Sequence) -> int:
    modes = [op.mode for op in ops]
    if any(m is None for m in modes):
        raise ValueError("deformed prefactor needs every operator to carry a mode label")
    return sum(sum(m) if isinstance(m, tuple) else m for m in modes)


def n_bracket(ops: Sequence, spec: BracketSpec | None = None, mode_sum: int | None = None):
    """The eps-antisymmetrized n-bracket, optionally with the mode-sum prefactor."""
    spec = spec or BracketSpec(len(ops))
    if spec.arity != len(ops):
        raise ValueError(f"bracket spec has arity {spec.arity} but {len(ops)} operators were given")
    out = antisymmetrized_product(ops)
    if spec.prefactor == "deformed" and spec.alpha:
        M = total_mode(ops) if mode_sum is None else mode_sum
        out = out * bracket_prefactor(spec.deformation, M, spec.arity)
    if mode_sum is not None:
        out.mode = mode_sum
    elif all(op.mode is not None for op in ops):
        out.mode = total_mode(ops)
    return out


def nambu_forms(a1, a2, a3):
    """The two displayed expansions of the operator Nambu 3-bracket."""
    left = a1 @ commutator(a2, a3) + a2 @ commutator(a3, a1) + a3 @ commutator(a1, a2)
    right = commutator(a2, a3) @ a1 + commutator(a3, a1) @ a2 + commutator(a1, a2) @ a3
    return left, right


def gji_sum(ops: Sequence, spec_inner: BracketSpec, spec_outer: BracketSpec):
    """sum over S_(2n-1) of sgn [[B_s1..B_sn], B_s(n+1), ..., B_s(2n-1)].

    Both brackets are antisymmetric in their own arguments, so the sum over
    permutations collapses to n!(n-1)! times a signed sum over the n-subsets.
    """
    n = spec_inner.arity
    total_count = 2 * n - 1
    if len(ops) != total_count:
        raise ValueError(f"GJI for arity {n} needs {total_count} operators")
    weight = _factorial(n) * _factorial(n - 1)
    total = None
    for subset in itertools.combinations(range(total_count), n):
        others = tuple(i for i in range(total_count) if i not in subset)
        sign = permutation_sign(subset + others)
        inner = n_bracket([ops[i] for i in subset], spec_inner)
        term = n_bracket([inner] + [ops[i] for i in others], spec_outer)
        term = term * (sign * weight)
        total = term if total is None else total + term
    return total


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


@dataclass(frozen=True)
class Witness:
    mode: object
    target: object
    expected: Fraction
    got: Fraction

    def as_dict(self) -> dict:
        return {"mode": self.mode, "target": self.target, "expected": self.expected, "got": self.got}


def _mode_key(n):
    if isinstance(n, tuple):
        return (sum(abs(x) for x in n), n)
    return (abs(n), n)


def op_equal(expected, got, window: tuple | None = None) -> Witness | None:
    """None when the actions agree on the shared domain, else the smallest-|mode| witness."""
    modes = sorted(set(expected.action) & set(got.action), key=_mode_key)
    if window is not None:
        modes = [n for n in modes if _in_window(n, window)]
    if not modes:
        raise WindowExhausted("operators share no valid modes")
    for n in modes:
        e_img, g_img = expected.action[n], got.action[n]
        if e_img != g_img:
            for t in sorted(set(e_img) | set(g_img), key=_mode_key):
                ev, gv = e_img.get(t, Fraction(0)), g_img.get(t, Fraction(0))
                if ev != gv:
                    return Witness(n, t, ev, gv)
    return None


def _in_window(n, window) -> bool:
    if isinstance(n, tuple):
        return all(window[0] <= x <= window[1] for x in n)
    return window[0] <= n <= window[1]


def combine(terms: Iterable[tuple[Fraction, object]], like=None):
    """Linear combination sum c_i O_i; an empty combination is the zero operator shaped like ``like``."""
    total = None
    for c, op in terms:
        if c == 0:
            continue
        term = op * c
        total = term if total is None else total + term
    if total is None:
        if like is None:
            raise ValueError("empty combination needs a template operator")
        return like.zero_like()
    return total
