"""Sparse exact polynomials: Laurent polynomials in z and truncated series in the times.

``TSeries`` is a polynomial in t_1..t_K where t_k has weight k; every product is
truncated at total weight W. ``XSeries`` adds one more variable x (graded by
its own degree cap) with ``TSeries`` coefficients, which is the ring needed for
exp(sum t_s x^s / s!). The time t_0 is fixed to 0 throughout.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping

from .errors import NonzeroConstantTerm, WindowExhausted, WindowMismatch

MultiMonomial = tuple  # exponent vector (e_1, ..., e_N)


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v != 0}


class LaurentPoly:
    __slots__ = ("terms", "window")

    def __init__(self, terms: Mapping[int, Fraction] | None = None, window: int = 12):
        self.window = window
        self.terms = _clean({int(e): Fraction(c) for e, c in (terms or {}).items()})
        for e in self.terms:
            if abs(e) > window:
                raise WindowExhausted(f"exponent {e} outside [-{window}, {window}]")

    @classmethod
    def monomial(cls, e: int, c=1, window: int = 12) -> "LaurentPoly":
        return cls({e: Fraction(c)}, window)

    def _check(self, other: "LaurentPoly") -> None:
        if other.window != self.window:
            raise WindowMismatch(f"windows {self.window} and {other.window} differ")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.window)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.window)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            out: dict[int, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
            return LaurentPoly(out, self.window)
        c = Fraction(other)
        return LaurentPoly({e: c * v for e, v in self.terms.items()}, self.window)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def coefficient(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))

    def map_terms(self, f: Callable[[int, Fraction], tuple[int, Fraction]]) -> "LaurentPoly":
        """Apply a monomial-wise linear map e -> (e', factor)."""
        out: dict[int, Fraction] = {}
        for e, c in self.terms.items():
            e2, factor = f(e, c)
            out[e2] = out.get(e2, 0) + factor
        return LaurentPoly(out, self.window)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})z^{e}" for e, c in sorted(self.terms.items()))


class TSeries:
    """Polynomial in t_1..t_K truncated at total weight W (weight of t_k is k)."""

    __slots__ = ("terms", "K", "W")

    def __init__(self, terms: Mapping[tuple, Fraction] | None, K: int, W: int):
        self.K, self.W = K, W
        self.terms: dict[tuple, Fraction] = {}
        for idx, c in (terms or {}).items():
            if c != 0 and weight(idx) <= W:
                self.terms[tuple(idx)] = Fraction(c)

    @classmethod
    def constant(cls, c, K: int, W: int) -> "TSeries":
        return cls({(0,) * K: Fraction(c)}, K, W)

    @classmethod
    def var(cls, k: int, K: int, W: int, c=1) -> "TSeries":
        if not 1 <= k <= K:
            raise ValueError(f"t_{k} outside t_1..t_{K}")
        idx = [0] * K
        idx[k - 1] = 1
        return cls({tuple(idx): Fraction(c)}, K, W)

    def zero(self) -> "TSeries":
        return TSeries(None, self.K, self.W)

    def _check(self, other: "TSeries") -> None:
        if (other.K, other.W) != (self.K, self.W):
            raise WindowMismatch(f"truncations (K={self.K}, W={self.W}) and (K={other.K}, W={other.W}) differ")

    def __add__(self, other):
        if not isinstance(other, TSeries):
            other = TSeries.constant(other, self.K, self.W)
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, 0) + c
        return TSeries(out, self.K, self.W)

    __radd__ = __add__

    def __neg__(self) -> "TSeries":
        return TSeries({i: -c for i, c in self.terms.items()}, self.K, self.W)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            c = Fraction(other)
            return TSeries({i: c * v for i, v in self.terms.items()}, self.K, self.W)
        self._check(other)
        out: dict[tuple, Fraction] = {}
        W = self.W
        right = [(i, weight(i), c) for i, c in other.terms.items()]
        for i1, c1 in self.terms.items():
            w1 = weight(i1)
            for i2, w2, c2 in right:
                if w1 + w2 > W:
                    continue
                idx = tuple(a + b for a, b in zip(i1, i2))
                out[idx] = out.get(idx, 0) + c1 * c2
        return TSeries(out, self.K, self.W)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, TSeries):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == TSeries.constant(other, self.K, self.W)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.K, Fraction(0))

    def truncate(self, W: int) -> "TSeries":
        return TSeries(self.terms, self.K, min(W, self.W))

    def derivative(self, k: int) -> "TSeries":
        """Partial derivative in t_k; t_k with k outside 1..K is absent, so the result is 0."""
        if not 1 <= k <= self.K:
            return self.zero()
        out: dict[tuple, Fraction] = {}
        for idx, c in self.terms.items():
            e = idx[k - 1]
            if e:
                new = list(idx)
                new[k - 1] = e - 1
                out[tuple(new)] = c * e
        return TSeries(out, self.K, self.W)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, c in sorted(self.terms.items()):
            mono = "*".join(f"t{k + 1}^{e}" if e > 1 else f"t{k + 1}" for k, e in enumerate(idx) if e)
            parts.append(f"({c}){'*' + mono if mono else ''}")
        return " + ".join(parts)


def weight(idx: Iterable[int]) -> int:
    return sum((k + 1) * e for k, e in enumerate(idx))


class XSeries:
    """Power series in x with TSeries coefficients, truncated at x-degree X."""

    __slots__ = ("coeffs", "X", "K", "W")

    def __init__(self, coeffs: Mapping[int, TSeries] | None, X: int, K: int, W: int):
        self.X, self.K, self.W = X, K, W
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if e <= X and not c.is_zero()}

    def __add__(self, other: "XSeries") -> "XSeries":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return XSeries(out, self.X, self.K, self.W)

    def __neg__(self) -> "XSeries":
        return XSeries({e: -c for e, c in self.coeffs.items()}, self.X, self.K, self.W)

    def __sub__(self, other: "XSeries") -> "XSeries":
        return self + (-other)

    def __mul__(self, other) -> "XSeries":
        if not isinstance(other, XSeries):
            return XSeries({e: c * other for e, c in self.coeffs.items()}, self.X, self.K, self.W)
        out: dict[int, TSeries] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                if e1 + e2 > self.X:
                    continue
                prod = c1 * c2
                out[e1 + e2] = out[e1 + e2] + prod if e1 + e2 in out else prod
        return XSeries(out, self.X, self.K, self.W)

    __rmul__ = __mul__

    def coefficient(self, e: int) -> TSeries:
        return self.coeffs.get(e, TSeries(None, self.K, self.W))

    def map_exponents(self, f: Callable[[int], tuple[int, Fraction]]) -> "XSeries":
        """Monomial-wise linear map x^e -> factor * x^e'."""
        out: dict[int, TSeries] = {}
        for e, c in self.coeffs.items():
            e2, factor = f(e)
            if factor == 0:
                continue
            term = c * factor
            out[e2] = out[e2] + term if e2 in out else term
        return XSeries(out, self.X, self.K, self.W)

    def constant_term(self) -> Fraction:
        return self.coefficient(0).constant_term()


def series_exp(s):
    """exp(s) for a TSeries or XSeries with zero constant term, exact to the truncation."""
    if s.constant_term() != 0:
        raise NonzeroConstantTerm(f"constant term {s.constant_term()}")
    if isinstance(s, TSeries):
        one = TSeries.constant(1, s.K, s.W)
        steps = s.W
    else:
        one = XSeries({0: TSeries.constant(1, s.K, s.W)}, s.X, s.K, s.W)
        # each factor of s raises x-degree or t-weight by at least one
        steps = s.X + s.W
    total, power = one, one
    for j in range(1, steps + 1):
        power = power * s * Fraction(1, j)
        if isinstance(power, TSeries) and power.is_zero():
            break
        if isinstance(power, XSeries) and not power.coeffs:
            break
        total = total + power
    return total


def rescale_times(s: TSeries, rule: Mapping[int, Fraction] | Callable[[int], Fraction]) -> TSeries:
    """Substitute t_k -> c_k t_k monomial-wise."""
    get = rule if callable(rule) else (lambda k: Fraction(rule.get(k, 1)))
    scale = [Fraction(get(k)) for k in range(1, s.K + 1)]
    out = {}
    for idx, c in s.terms.items():
        for k, e in enumerate(idx):
            if e:
                c = c * scale[k] ** e
        out[idx] = c
    return TSeries(out, s.K, s.W)


def coefficient_of(s, key) -> Fraction | TSeries:
    """Extract a coefficient: exponent of a LaurentPoly, multi-index of a TSeries, x-degree of an XSeries."""
    if isinstance(s, LaurentPoly):
        return s.coefficient(key)
    if isinstance(s, TSeries):
        key = tuple(key) + (0,) * (s.K - len(tuple(key)))
        return s.terms.get(key, Fraction(0))
    return s.coefficient(key)


def exp_times_series(K: int, W: int, X: int | None = None) -> XSeries:
    """E(x, t) = exp(sum_{s=1}^K t_s x^s / s!) in the (x, t) ring."""
    X = W if X is None else X
    arg = XSeries({s: TSeries.var(s, K, W, Fraction(1, factorial(s))) for s in range(1, K + 1)}, X, K, W)
    return series_exp(arg)
