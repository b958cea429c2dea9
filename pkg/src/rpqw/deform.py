"""Deformation families and the scalar quantities built from them.

A deformation is fixed by a function R(u, v) with R(1, 1) = 0 and two
rationals 0 < q < p <= 1. The deformed number is [n] = R(p^n, q^n).

Three families are supported:

* ``pq``: R(u, v) = (u - v)/(p - q), so [n] = (p^n - q^n)/(p - q)
* ``q``: p = 1 and R(u, v) = (v - 1)/(q - 1), so [n] = (1 - q^n)/(1 - q)
* ``custom``: a finite Laurent table R(u, v) = sum r_st u^s v^t

``classical_limit()`` adds the undeformed point p = q = 1 with [n] = n, which
is where every displayed identity must reduce to its classical form.

All values are exact ``Fraction`` objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    DivisionByZeroMode,
    IndeterminateAtZero,
    IndexOrder,
    NegativeArgument,
    NotNormalized,
    ParameterOrdering,
    UnsupportedExponent,
)

FAMILIES = ("pq", "q", "custom")
CLASSICAL = "classical"


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and "num/den" strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


@dataclass(frozen=True)
class Deformation:
    family: str
    p: Fraction
    q: Fraction
    a: int = 1
    # custom family only: ((s, t, r_st), ...) and the lower exponent bound l
    terms: tuple = ()
    l: int = 0

    @property
    def builtin(self) -> bool:
        return self.family != "custom"

    def evaluate(self, u: Fraction, v: Fraction) -> Fraction:
        """R(u, v) at arbitrary nonzero rational arguments."""
        if self.family == CLASSICAL:
            raise ValueError("the undeformed limit has no function R")
        if self.family == "pq":
            return (u - v) / (self.p - self.q)
        if self.family == "q":
            return (v - 1) / (self.q - 1)
        total = Fraction(0)
        for s, t, r in self.terms:
            if (u == 0 and s < 0) or (v == 0 and t < 0):
                raise ZeroDivisionError("custom table has a pole at this point")
            total += r * u**s * v**t
        return total

    def __str__(self) -> str:
        text = f"{self.family}(p={self.p}, q={self.q}"
        if self.a != 1:
            text += f", a={self.a}"
        return text + ")"


def make_deformation(
    family: str,
    p=None,
    q=None,
    terms: Iterable[Sequence] | None = None,
    l: int = 0,
    a: int = 1,
) -> Deformation:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if q is None:
        raise ParameterOrdering("q is required")
    q = as_fraction(q)
    if family == "q":
        if p is not None and as_fraction(p) != 1:
            raise ParameterOrdering("the q family fixes p = 1")
        p = Fraction(1)
    else:
        if p is None:
            raise ParameterOrdering("p is required")
        p = as_fraction(p)
    if not (0 < q < p <= 1):
        raise ParameterOrdering(f"need 0 < q < p <= 1, got p={p}, q={q}")
    if a < 1:
        raise ParameterOrdering("scaling exponent must be a positive integer")

    table: tuple = ()
    if family == "custom":
        if terms is None:
            raise NotNormalized("custom family needs a coefficient table")
        merged: dict[tuple[int, int], Fraction] = {}
        for s, t, r in terms:
            s, t = int(s), int(t)
            if s < -l or t < -l:
                raise NotNormalized(f"exponent ({s}, {t}) below -l = {-l}")
            merged[(s, t)] = merged.get((s, t), Fraction(0)) + as_fraction(r)
        table = tuple(sorted((s, t, r) for (s, t), r in merged.items() if r != 0))

    d = Deformation(family, p, q, a, table, l)
    if deformed_number(replace(d, a=1), 0) != 0:
        raise NotNormalized("R(1, 1) must vanish")
    return d


def classical_limit() -> Deformation:
    """The undeformed point: p = q = 1 and [n] = n."""
    return Deformation(CLASSICAL, Fraction(1), Fraction(1))


def load_custom_table(path: str | Path) -> tuple[int, list]:
    """Read a {"l": int, "terms": [[s, t, "num/den"], ...]} file."""
    data = json.loads(Path(path).read_text())
    return int(data.get("l", 0)), [(int(s), int(t), as_fraction(r)) for s, t, r in data["terms"]]


def scaled_family(d: Deformation, a: int) -> Deformation:
    """Same family with numbers evaluated at p^a, q^a."""
    if a < 1:
        raise ParameterOrdering("scaling exponent must be a positive integer")
    return replace(d, a=a)


def _closed_under_negation(d: Deformation) -> bool:
    return all(s <= d.l and t <= d.l for s, t, _ in d.terms)


def negative_modes_ok(d: Deformation) -> bool:
    """Whether [n] is available for negative n."""
    return d.builtin or _closed_under_negation(d)


@lru_cache(maxsize=None)
def deformed_number(d: Deformation, n: int) -> Fraction:
    if d.family == CLASSICAL:
        return Fraction(n)
    pa, qa = d.p**d.a, d.q**d.a
    if d.family == "pq":
        return (pa**n - qa**n) / (pa - qa)
    if d.family == "q":
        return (1 - qa**n) / (1 - qa)
    if n < 0 and not _closed_under_negation(d):
        raise UnsupportedExponent(f"table exponents leave [-l, l] at n={n}")
    return d.evaluate(pa**n, qa**n)


@lru_cache(maxsize=None)
def k_eigenvalue(d: Deformation, mode: int) -> Fraction:
    """Eigenvalue of K(P, Q) on z^mode, always with unscaled p, q."""
    if d.builtin:
        return Fraction(1)
    if mode == 0:
        raise IndeterminateAtZero("K(P, Q) is 0/0 on z^0 for a custom family")
    base = replace(d, a=1)
    return (d.p - d.q) * deformed_number(base, mode) / (d.p**mode - d.q**mode)


@lru_cache(maxsize=None)
def derivative_coefficient(d: Deformation, n: int) -> Fraction:
    """Coefficient c with D z^n = c z^(n-1).

    For a = 1 this is [n]. For a scaled family the outer K stays unscaled and
    the difference quotient uses p^a, q^a.
    """
    if n == 0:
        return Fraction(0)
    if d.a == 1 or d.family == CLASSICAL:
        return deformed_number(d, n)
    pa, qa = d.p**d.a, d.q**d.a
    return k_eigenvalue(d, n) * (pa**n - qa**n) / (pa - qa)


def derivative_product(d: Deformation, n: int, k: int) -> Fraction:
    """Coefficient of D^k z^n, the product c(n) c(n-1) ... c(n-k+1)."""
    out = Fraction(1)
    for i in range(k):
        out *= derivative_coefficient(d, n - i)
        if out == 0:
            break
    return out


@lru_cache(maxsize=None)
def deformed_factorial(d: Deformation, n: int) -> Fraction:
    if n < 0:
        raise NegativeArgument(f"factorial of {n}")
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= deformed_number(d, i)
    return out


def deformed_binomial(d: Deformation, n: int, k: int) -> Fraction:
    if n < 0 or k < 0 or k > n:
        raise IndexOrder(f"binomial needs 0 <= k <= n, got n={n}, k={k}")
    return deformed_factorial(d, n) / (deformed_factorial(d, k) * deformed_factorial(d, n - k))


def falling_factorial(d: Deformation, n: int, k: int) -> Fraction:
    """[n][n-1]...[n-k+1], with the convention 0 when k > n and 1 when k = 0."""
    if k < 0:
        raise NegativeArgument(f"falling factorial order {k}")
    if k == 0:
        return Fraction(1)
    if k > n:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out *= deformed_number(d, n - i)
    return out


def bracket_prefactor(d: Deformation, mode_sum: int, arity: int) -> Fraction:
    """(1/2 [-2M]/[-M])^alpha with alpha = 1 for even arity and 0 for odd."""
    if arity < 2:
        raise IndexOrder("bracket arity must be at least 2")
    if arity % 2:
        return Fraction(1)
    if d.family == CLASSICAL:
        return Fraction(1)
    if mode_sum == 0:
        if d.builtin:
            return Fraction(1)
        raise IndeterminateAtZero("[-2M]/[-M] at M = 0 for a custom family")
    den = deformed_number(d, -mode_sum)
    if den == 0:
        raise DivisionByZeroMode(f"[-M] vanishes at M = {mode_sum}")
    return deformed_number(d, -2 * mode_sum) / (2 * den)


def vandermonde(d: Deformation, modes: Sequence[int], offset: int = 0) -> Fraction:
    nums = [deformed_number(d, m + offset) for m in modes]
    out = Fraction(1)
    for k in range(len(nums)):
        for j in range(k):
            out *= nums[k] - nums[j]
    return out
