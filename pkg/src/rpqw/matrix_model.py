"""Differential operators in the times t_k and the matrix-model constraint checks.

``TOperator`` is a finite sum  c(t) * d_{k_1} ... d_{k_n}  with the
coefficient written to the left of commuting partial derivatives in the t_k.
``MomentExpr`` is a finite sum  c_j(t) M_j  where M_j stands for the formal
moment  int x^(gamma + j) E(x, t) dx  with  E = exp(sum_s t_s x^s / s!).
The two meet in the toy-model duality: a t-space operator applied to M_0
must reproduce, up to one overall scalar, the x-space expansion of the
integrand whose integral vanishes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .deform import (
    Deformation,
    as_fraction,
    deformed_binomial,
    deformed_number,
    derivative_coefficient,
    k_eigenvalue,
    scaled_family,
)
from .errors import DivisionByZeroMode, IndexOrder, NegativeArgument, PoleHit, TruncationOverflow
from .laurent import TSeries, XSeries, exp_times_series, rescale_times, series_exp, weight
from .operators import Witness, permutation_sign
from .outcome import FAIL, PASS, CheckOutcome

Key = tuple  # sorted tuple of derivative indices


class TOperator:
    """sum over keys of coefficient(t) * prod_{k in key} d/dt_k, truncated at weight W."""

    __slots__ = ("terms", "K", "W", "dropped")

    def __init__(self, terms: dict | None, K: int, W: int, dropped: int = 0):
        self.K, self.W, self.dropped = K, W, dropped
        self.terms: dict[Key, TSeries] = {}
        for key, c in (terms or {}).items():
            if not isinstance(c, TSeries):
                c = TSeries.constant(c, K, W)
            if not c.is_zero():
                self.terms[tuple(sorted(key))] = c

    @classmethod
    def identity(cls, K: int, W: int) -> "TOperator":
        return cls({(): 1}, K, W)

    @classmethod
    def partial(cls, k: int, K: int, W: int, c=1) -> "TOperator":
        return cls({(k,): c}, K, W)

    def __add__(self, other: "TOperator") -> "TOperator":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return TOperator(out, self.K, self.W, self.dropped + other.dropped)

    def __neg__(self) -> "TOperator":
        return self * -1

    def __sub__(self, other: "TOperator") -> "TOperator":
        return self + (-other)

    def __mul__(self, c) -> "TOperator":
        """Left multiplication by a scalar or a TSeries coefficient."""
        if not isinstance(c, TSeries):
            c = as_fraction(c) if not isinstance(c, int) else Fraction(c)
        return TOperator({k: c * v for k, v in self.terms.items()}, self.K, self.W, self.dropped)

    __rmul__ = __mul__

    def is_constant(self) -> bool:
        return all(set(c.terms) <= {(0,) * self.K} for c in self.terms.values())

    def __matmul__(self, other: "TOperator") -> "TOperator":
        """Composition self o other; the right factor must have constant coefficients."""
        if not other.is_constant() and any(self.terms):
            raise ValueError("composition with t-dependent right coefficients is not normal ordered")
        out: dict[Key, TSeries] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(sorted(k1 + k2))
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return TOperator(out, self.K, self.W, self.dropped + other.dropped)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def apply(self, f: TSeries) -> TSeries:
        out = f.zero()
        for key, c in self.terms.items():
            g = f
            for k in key:
                if k < 1:
                    raise NegativeArgument(f"d/dt_{k} has no action on a series in t_1..t_K")
                g = g.derivative(k)
            out = out + c * g
        return out

    def apply_moments(self, z: "MomentExpr") -> "MomentExpr":
        out = MomentExpr({}, self.K, self.W)
        for key, c in self.terms.items():
            g = z
            for k in key:
                g = g.derivative(k)
            out = out + g.scale(c)
        return out

    def __repr__(self) -> str:
        return f"TOperator({len(self.terms)} terms, K={self.K}, W={self.W}, dropped={self.dropped})"


class MomentExpr:
    """sum_j c_j(t) M_j."""

    __slots__ = ("terms", "K", "W")

    def __init__(self, terms: dict, K: int, W: int):
        self.K, self.W = K, W
        self.terms = {j: c for j, c in terms.items() if not c.is_zero()}

    @classmethod
    def moment(cls, j: int, K: int, W: int) -> "MomentExpr":
        return cls({j: TSeries.constant(1, K, W)}, K, W)

    def __add__(self, other: "MomentExpr") -> "MomentExpr":
        out = dict(self.terms)
        for j, c in other.terms.items():
            out[j] = out[j] + c if j in out else c
        return MomentExpr(out, self.K, self.W)

    def scale(self, c) -> "MomentExpr":
        return MomentExpr({j: c * v for j, v in self.terms.items()}, self.K, self.W)

    def derivative(self, k: int) -> "MomentExpr":
        """d/dt_k (c M_j) = (d c / dt_k) M_j + c M_(j+k) / k!."""
        out: dict[int, TSeries] = {}
        for j, c in self.terms.items():
            dc = c.derivative(k)
            if not dc.is_zero():
                out[j] = out[j] + dc if j in out else dc
            moved = c * Fraction(1, factorial(k))
            out[j + k] = out[j + k] + moved if j + k in out else moved
        return MomentExpr(out, self.K, self.W)

    def coefficient(self, j: int) -> TSeries:
        return self.terms.get(j, TSeries(None, self.K, self.W))


# ---------------------------------------------------------------------------
# Bell coefficients and determinant operators


def bell_coefficients(K: int, W: int | None = None) -> list[TSeries]:
    """B_0..B_K from exp(sum_s t_s x^s / s!) = sum_k B_k x^k / k!."""
    W = K if W is None else W
    if W < K:
        raise TruncationOverflow(f"weight cap {W} below the highest Bell index {K}")
    return _bells(K, W, K)


def _bells(K: int, W: int, n: int) -> list[TSeries]:
    """B_0..B_n in the ring of t_1..t_K truncated at weight W."""
    E = exp_times_series(K, W, X=n)
    return [E.coefficient(k) * factorial(k) for k in range(n + 1)]


def bell_restricted(B: TSeries, k: int) -> TSeries:
    """B evaluated with t_s = 0 for s > k."""
    terms = {idx: c for idx, c in B.terms.items() if all(e == 0 for e in idx[k:])}
    return TSeries(terms, B.K, B.W)


def rescaled_bell(d: Deformation, B: TSeries, a: int) -> TSeries:
    """B with t_k replaced by (q^(ak) - p^(ak)) t_k."""
    return rescale_times(B, lambda k: d.q ** (a * k) - d.p ** (a * k))


def det_operator(m: int, N: int, K: int, W: int) -> TOperator:
    """(1/N!) times the determinant with (m i)! d/dt_(m i) on the i-th subdiagonal and 1..N-1 above."""
    if N < 1:
        raise ValueError("determinant size must be at least 1")
    if m == 0:
        # every entry d/dt_0 multiplies by N, and the normalized determinant is e_N(1, ..., 1) = 1
        return TOperator.identity(K, W)

    def entry(i: int, j: int):
        if j <= i:
            k = m * (i - j + 1)
            return ((k,), factorial(k))
        if j == i + 1:
            return ((), i + 1)
        return None

    out: dict[Key, Fraction] = {}
    for perm in itertools.permutations(range(N)):
        key: tuple = ()
        c = Fraction(permutation_sign(perm), factorial(N))
        for i in range(N):
            e = entry(i, perm[i])
            if e is None:
                break
            key += e[0]
            c *= e[1]
        else:
            key = tuple(sorted(key))
            out[key] = out.get(key, 0) + c
    return TOperator(out, K, W)


def multi_index_det_operator(ms: Sequence[int], K: int, W: int) -> TOperator:
    """The operator acting on E as the S_N-symmetrized monomial in the indices, by the subset recursion."""
    ms = tuple(ms)
    memo: dict[tuple, TOperator] = {}

    def build(idx: tuple) -> TOperator:
        if not idx:
            return TOperator.identity(K, W)
        if idx in memo:
            return memo[idx]
        n = len(idx)
        total = TOperator(None, K, W)
        for k in range(1, n + 1):
            for S in itertools.combinations(idx, k):
                s = sum(ms[i] for i in S)
                rest = tuple(i for i in idx if i not in S)
                term = TOperator.partial(s, K, W, factorial(s)) @ build(rest)
                total = total + term * ((-1) ** (k - 1) * factorial(k))
        memo[idx] = total * Fraction(1, n)
        return memo[idx]

    return build(tuple(range(len(ms))))


def power_sum_exponential(xs: Sequence, K: int, W: int) -> TSeries:
    """exp(sum_k t_k/k! sum_i x_i^k) for numeric x_i, truncated at weight W."""
    xs = [as_fraction(x) for x in xs]
    arg = TSeries(None, K, W)
    for k in range(1, K + 1):
        arg = arg + TSeries.var(k, K, W, Fraction(sum(x**k for x in xs), factorial(k)))
    return series_exp(arg)


def _series_witness(expected: TSeries, got: TSeries, mode) -> Witness | None:
    for idx in sorted(set(expected.terms) | set(got.terms), key=lambda i: (weight(i), i)):
        e, g = expected.terms.get(idx, Fraction(0)), got.terms.get(idx, Fraction(0))
        if e != g:
            return Witness(mode, idx, e, g)
    return None


def _property_check(check_id: str, params: dict, op: TOperator, factor: Fraction, xs, W: int, depth: int) -> CheckOutcome:
    # E is built deeper than W so every derivative of weight <= depth lands exactly below W
    Kb = W + depth
    E = power_sum_exponential(xs, Kb, Kb)
    got = op.apply(E).truncate(W)
    expected = (E * factor).truncate(W)
    wit = _series_witness(expected, got, mode=tuple(xs))
    if wit is None:
        return CheckOutcome(check_id, params, PASS)
    return CheckOutcome(check_id, params, FAIL, witness=wit)


def verify_det_property(m: int, N: int, xs: Sequence, W: int) -> CheckOutcome:
    """D^m_N E = prod_j x_j^m E for numeric x, compared up to weight W."""
    if len(xs) != N:
        raise ValueError(f"need {N} x-values, got {len(xs)}")
    xs = [as_fraction(x) for x in xs]
    params = {"m": m, "N": N, "x": [str(x) for x in xs], "W": W}
    depth = m * N
    op = det_operator(m, N, W + depth, W + depth)
    factor = Fraction(1)
    for x in xs:
        factor *= x**m
    return _property_check("det_property", params, op, factor, xs, W, depth)


def verify_multi_index(ms: Sequence[int], xs: Sequence, W: int) -> CheckOutcome:
    """D_(m_1..m_N) E = (sum over S_N of prod_j x_j^(m_sigma(j))) E."""
    if len(xs) != len(ms):
        raise ValueError("need one x-value per index")
    xs = [as_fraction(x) for x in xs]
    params = {"m": list(ms), "x": [str(x) for x in xs], "W": W}
    depth = sum(ms)
    op = multi_index_det_operator(ms, W + depth, W + depth)
    factor = Fraction(0)
    for perm in itertools.permutations(range(len(ms))):
        term = Fraction(1)
        for j, x in enumerate(xs):
            term *= x ** ms[perm[j]]
        factor += term
    return _property_check("multi_index_det", params, op, factor, xs, W, depth)


def bell_recursion(K: int, W: int | None = None) -> list[TSeries]:
    """B_0..B_K from B_(k+1) = sum_j C(k, j) t_(j+1) B_(k-j), independent of series_exp."""
    W = K if W is None else W
    out = [TSeries.constant(1, K, W)]
    for k in range(K):
        nxt = TSeries(None, K, W)
        for j in range(k + 1):
            if j + 1 > K:
                break
            nxt = nxt + TSeries.var(j + 1, K, W, comb(k, j)) * out[k - j]
        out.append(nxt)
    return out


def verify_bell_oracle(K: int) -> CheckOutcome:
    params = {"K": K}
    for k, (B, R) in enumerate(zip(bell_coefficients(K), bell_recursion(K))):
        wit = _series_witness(R, B, mode=k)
        if wit is not None:
            return CheckOutcome("bell_oracle", params, FAIL, witness=wit)
    return CheckOutcome("bell_oracle", params, PASS)


def verify_rescaled_times(d: Deformation, a: int, K: int) -> CheckOutcome:
    """B_k at t_k -> (q^(ak) - p^(ak)) t_k against k! [x^k] E(q^a x) / E(p^a x)."""
    params = {"a": a, "K": K}
    E = exp_times_series(K, K, X=K)
    up = E.map_exponents(lambda e: (e, d.q ** (a * e)))
    arg = XSeries(
        {s: TSeries.var(s, K, K, -(d.p ** (a * s)) / factorial(s)) for s in range(1, K + 1)}, K, K, K
    )
    quotient = up * series_exp(arg)
    for k, B in enumerate(bell_coefficients(K)):
        wit = _series_witness(quotient.coefficient(k) * factorial(k), rescaled_bell(d, B, a), mode=k)
        if wit is not None:
            return CheckOutcome("rescaled_times", params, FAIL, witness=wit)
    return CheckOutcome("rescaled_times", params, PASS)


def verify_det_base(m: int, xs: Sequence, W: int) -> CheckOutcome:
    """The one-row determinant and the one-index recursion both act as m! d/dt_m,
    which multiplies E by the power sum of the x_i."""
    if m < 1:
        raise IndexOrder(f"the base relation needs m >= 1, got {m}")
    xs = [as_fraction(x) for x in xs]
    params = {"m": m, "x": [str(x) for x in xs], "W": W}
    Kb = W + m
    base = TOperator.partial(m, Kb, Kb, factorial(m))
    for name, op in (("determinant", det_operator(m, 1, Kb, Kb)), ("recursion", multi_index_det_operator((m,), Kb, Kb))):
        wits = toperator_witnesses(base, op, limit=1)
        if wits:
            return CheckOutcome("det_base", params, FAIL, witness=wits[0], note=f"{name} differs from m! d/dt_m")
    factor = sum((x**m for x in xs), Fraction(0))
    return _property_check("det_base", params, base, factor, xs, W, m)


# ---------------------------------------------------------------------------
# constraint operators of the elliptic model

WTILDE_SIGNS = ("displays", "literal")


def _bell_sum(
    d: Deformation, m: int, shift: int, scale: int, N: int, K: int, W: int, bells: list[TSeries]
) -> TOperator:
    """sum_l (l+m-shift)!/l! B_l(rescaled by scale) D^(2 scale)_N d/dt_(l+m-shift); negative indices dropped."""
    D = det_operator(2 * scale, N, K, W)
    total = TOperator(None, K, W)
    dropped = 0
    for l in range(W + 1):
        idx = l + m - shift
        if idx < 0:
            dropped += 1
            continue
        if idx > K:
            raise TruncationOverflow(f"d/dt_{idx} beyond K={K}")
        B = rescaled_bell(d, bells[l], scale)
        if B.is_zero():
            continue
        term = (D @ TOperator.partial(idx, K, W)) * B
        total = total + term * Fraction(factorial(idx), factorial(l))
    total.dropped += dropped
    return total


def _wtilde_K(d: Deformation, m: int) -> Fraction:
    return k_eigenvalue(d, m)


def _require_deformed(d: Deformation) -> None:
    if d.p == d.q:
        raise DivisionByZeroMode("the constraint operators carry 1/(q - p), which is singular at p = q")


def wtilde_default_K(m: int, r: int, N: int, W: int) -> int:
    return max(W + m, 2 * (r - 1) * N, 1)


def make_Wtilde(d: Deformation, m: int, r: int, N: int, W: int, K: int | None = None, sign: str = "displays") -> TOperator:
    """The general constraint operator with prefactor (s K/(q-p))^(r-1) p^(m+r-1).

    ``sign="displays"`` takes s = -1, the sign carried by the r = 2, 3, 4
    displays and by the reduction from the multi-index operators;
    ``sign="literal"`` takes s = +1 as in the general formula.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if r < 1:
        raise ValueError("r must be at least 1")
    if sign not in WTILDE_SIGNS:
        raise ValueError(f"unknown sign reading {sign!r}")
    _require_deformed(d)
    K = wtilde_default_K(m, r, N, W) if K is None else K
    p, q = d.p, d.q
    bells = _bells(K, W, W)
    s = -1 if sign == "displays" else 1
    pref = (s * _wtilde_K(d, m) / (q - p)) ** (r - 1) * p ** (m + r - 1)
    total = TOperator(None, K, W)
    for j in range(r):
        a = r - j - 1
        alpha = a * m - a * a * N + Fraction(a * (3 * r - 3 * j - 4), 2)
        c = (-1) ** j * deformed_binomial(d, r - 1, j) * (q / p) ** alpha
        total = total + _bell_sum(d, m, 2 * a * N, a, N, K, W, bells) * c
    return total * pref


def wtilde_display(d: Deformation, m: int, r: int, N: int, W: int, K: int | None = None) -> TOperator:
    """The r = 2, 3, 4 displays as printed."""
    if r not in (2, 3, 4):
        raise ValueError("displays exist for r = 2, 3, 4 only")
    _require_deformed(d)
    K = wtilde_default_K(m, r, N, W) if K is None else K
    p, q = d.p, d.q
    bells = _bells(K, W, W)
    Kp = _wtilde_K(d, m)
    qp = q / p
    base = TOperator.partial(m, K, W, factorial(m))

    def S(a: int) -> TOperator:
        return _bell_sum(d, m, 2 * a * N, a, N, K, W, bells)

    if r == 2:
        body = S(1) * qp ** (m - N + 1) - base
        return body * (-Kp / (q - p) * p ** (m + 1))
    two, three = deformed_number(d, 2), deformed_number(d, 3)
    if r == 3:
        body = S(2) * qp ** (2 * m - 4 * N + 5) - S(1) * (qp ** (m + 1 - N) * two) + base
        return body * (Kp / (q - p) ** 2 * p ** (m + 2))
    body = (
        S(3) * qp ** (3 * m - 9 * N + 12)
        - S(2) * (three * qp ** (2 * m - 4 * N + 5))
        + S(1) * (three * qp ** (m + 1 - N))
        - base
    )
    return body * (-Kp / (q - p) ** 3 * p ** (m + 3))


def toperator_witnesses(expected: TOperator, got: TOperator, limit: int | None = None) -> list[Witness]:
    """Every (derivative key, t-monomial) where the coefficient maps differ."""
    out = []
    for key in sorted(set(expected.terms) | set(got.terms), key=lambda k: (len(k), k)):
        e = expected.terms.get(key, TSeries(None, expected.K, expected.W))
        g = got.terms.get(key, TSeries(None, got.K, got.W))
        for idx in sorted(set(e.terms) | set(g.terms), key=lambda i: (weight(i), i)):
            ev, gv = e.terms.get(idx, Fraction(0)), g.terms.get(idx, Fraction(0))
            if ev != gv:
                out.append(Witness(key, idx, ev, gv))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def witness_shape(witnesses: Iterable[Witness]) -> tuple:
    """The parameter-free part of a witness list: which (key, monomial) slots differ."""
    return tuple((w.mode, w.target) for w in witnesses)


def verify_Wtilde_specializations(d: Deformation, m: int, N: int, W: int, r: int, sign: str = "displays") -> CheckOutcome:
    """General-formula operator against the printed r-display, as formal operators."""
    params = {"m": m, "N": N, "W": W, "r": r, "sign": sign}
    got = make_Wtilde(d, m, r, N, W, sign=sign)
    expected = wtilde_display(d, m, r, N, W)
    wits = toperator_witnesses(expected, got)
    data = {"dropped": got.dropped, "shape": [list(map(list, s)) for s in witness_shape(wits)]}
    if not wits:
        return CheckOutcome("wtilde_specialization", params, PASS, data=data)
    return CheckOutcome("wtilde_specialization", params, FAIL, witness=wits[0], data=data, note=f"{len(wits)} differing coefficients")


# ---------------------------------------------------------------------------
# toy model


def _scaled_falling(da: Deformation, n: int, k: int) -> Fraction:
    """_a A^k_n as the falling product of the scaled derivative coefficients; 0 when k > n >= 0."""
    if k < 0:
        raise NegativeArgument(f"falling factorial order {k}")
    if k > n >= 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out *= derivative_coefficient(da, n - i)
    return out


TOY_FORMS = ("general", "example", "remark")


def make_toy_operator(
    d: Deformation, a: int, gamma: int, m: int, r: int, K: int, W: int, form: str = "general"
) -> TOperator:
    """The toy-model constraint operator.

    ``form="general"`` is the double sum over i and k with B_(k(r-1-i))(t_1..t_k)
    and (m + k(r-1-i))!/k!. ``form="example"`` is the printed r = 2, 3, 4
    example, ``form="remark"`` the q- or (p,q)-family specialization. Sums
    over k run to K; the i = r-1 tail has no weight cut-off.
    """
    if gamma < 0 or m < 0:
        raise NegativeArgument("gamma and m must be nonnegative integers")
    if form not in TOY_FORMS:
        raise ValueError(f"unknown form {form!r}")
    da = scaled_family(d, a)
    p, q = d.p, d.q
    bells = _bells(K, W, K)
    n0 = m + r + gamma - 1
    total = TOperator(None, K, W)

    if form == "example":
        if r == 2:
            part = TOperator(None, K, W)
            for k in range(1, K + 1):
                part = part + TOperator.partial(m + k, K, W, Fraction(factorial(m + k), factorial(k)) * _scaled_falling(da, k, 1)) * bells[k]
            tail = sum((p ** (a * k) for k in range(1, K + 1)), Fraction(0))
            out = part * q ** (a * (m + 1 + gamma))
            return out + TOperator.partial(m, K, W, deformed_number(d, m + gamma + 1) * factorial(m) * tail)
        if r not in (3, 4):
            raise ValueError("examples exist for r = 2, 3, 4 only")

    for i in range(r):
        e = r - 1 - i
        head = deformed_binomial(d, r - 1, i) * _scaled_falling(da, n0, i)
        if form == "example" and r == 4:
            head *= q ** (a * e * (m + 3 + gamma))
        else:
            head *= q ** (a * e * n0)
        if head == 0:
            continue
        for k in range(1, K + 1):
            if form == "remark":
                # the q-family remark carries no p power; at p = 1 the two agree anyway
                idx = m + k
                bell = bells[k]
                c = p ** (a * i * k) * Fraction(factorial(idx), factorial(k))
            elif form == "example":
                idx = m + k * e
                bell = bells[k] if r == 3 else (bells[k * e] if k * e <= K else TSeries(None, K, W))
                c = p ** (a * i * k) * Fraction(factorial(idx), factorial(k * e))
            else:
                idx = m + k * e
                bell = bell_restricted(bells[k * e], k) if k * e <= K else TSeries(None, K, W)
                c = p ** (a * i * k) * Fraction(factorial(idx), factorial(k))
            c *= _scaled_falling(da, k, e)
            if c == 0 or bell.is_zero():
                continue
            total = total + TOperator.partial(idx, K, W, head * c) * bell
    return total


def xspace_expansion(d: Deformation, a: int, gamma: int, m: int, r: int, K: int, W: int) -> MomentExpr:
    """D_a^(r-1)(x^(m+gamma+r-1) E) / (x^gamma E) as sum_j c_j(t) M_j, exact for j <= m + W.

    The scaled derivative is applied monomial-wise in the (x, t) ring, so
    f(p^a x) is exact without any substitution in the times.
    """
    if gamma < 0 or m < 0:
        raise NegativeArgument("gamma and m must be nonnegative integers")
    da = scaled_family(d, a)
    n0 = m + gamma + r - 1
    X = n0 + W
    E = exp_times_series(K, W, X)
    f = E.map_exponents(lambda e: (e + n0, Fraction(1)))
    for _ in range(r - 1):
        f = f.map_exponents(lambda e: (e - 1, derivative_coefficient(da, e)))
    neg = XSeries({s: TSeries.var(s, K, W, Fraction(-1, factorial(s))) for s in range(1, K + 1)}, X, K, W)
    g = f * series_exp(neg)
    terms = {}
    for j in range(m + W + 1):
        c = g.coefficient(gamma + j)
        if not c.is_zero():
            terms[j] = c
    return MomentExpr(terms, K, W)


def integrand_display(d: Deformation, a: int, gamma: int, m: int, r: int, K: int, W: int) -> MomentExpr:
    """The printed expansion of the integrand over the moments, with (k(r-1-i))! in the denominator."""
    da = scaled_family(d, a)
    p, q = d.p, d.q
    n0 = m + r + gamma - 1
    bells = _bells(K, W, K)
    terms: dict[int, TSeries] = {}
    for i in range(r):
        e = r - 1 - i
        head = deformed_binomial(d, r - 1, i) * _scaled_falling(da, n0, i) * q ** (a * e * n0)
        for k in range(1, K + 1):
            if k * e > K:
                continue
            bell = bell_restricted(bells[k * e], k)
            c = head * p ** (a * i * k) * Fraction(1, factorial(k * e)) * _scaled_falling(da, k, e)
            if c == 0 or bell.is_zero():
                continue
            j = m + k * e
            terms[j] = terms[j] + bell * c if j in terms else bell * c
    return MomentExpr(terms, K, W)


def moment_witnesses(expected: MomentExpr, got: MomentExpr, jmax: int, slice_zero: bool = False) -> list[Witness]:
    out = []
    for j in range(jmax + 1):
        e, g = expected.coefficient(j), got.coefficient(j)
        for idx in sorted(set(e.terms) | set(g.terms), key=lambda i: (weight(i), i)):
            if slice_zero and any(idx):
                continue
            ev, gv = e.terms.get(idx, Fraction(0)), g.terms.get(idx, Fraction(0))
            if ev != gv:
                out.append(Witness(j, idx, ev, gv))
    return out


def _first_nonzero(expr: MomentExpr, jmax: int, slice_zero: bool):
    for j in range(jmax + 1):
        c = expr.coefficient(j)
        for idx in sorted(c.terms, key=lambda i: (weight(i), i)):
            if slice_zero and any(idx):
                continue
            return j, idx
    return None


def compare_up_to_scalar(oracle: MomentExpr, got: MomentExpr, jmax: int, slice_zero: bool = False):
    """Fit got = lam * oracle at the first nonzero oracle coefficient, then list mismatches."""
    anchor = _first_nonzero(oracle, jmax, slice_zero)
    if anchor is None:
        lam = Fraction(1)
    else:
        j, idx = anchor
        lam = got.coefficient(j).terms.get(idx, Fraction(0)) / oracle.coefficient(j).terms[idx]
    return lam, moment_witnesses(oracle.scale(lam), got, jmax, slice_zero)


def verify_toy_duality(d: Deformation, a: int, gamma: int, m: int, r: int, K: int, W: int) -> CheckOutcome:
    """t-space operator on M_0 against the x-space oracle, up to one scalar.

    ``data["slice_zero"]`` carries the t = 0 comparison separately.
    """
    params = {"a": a, "gamma": gamma, "m": m, "r": r, "K": K, "W": W}
    oracle = xspace_expansion(d, a, gamma, m, r, K, W)
    op = make_toy_operator(d, a, gamma, m, r, K, W)
    got = op.apply_moments(MomentExpr.moment(0, K, W))
    jmax = m + W
    lam0, wits0 = compare_up_to_scalar(oracle, got, jmax, slice_zero=True)
    lam, wits = compare_up_to_scalar(oracle, got, jmax)
    data = {
        "slice_zero": PASS if not wits0 else FAIL,
        "slice_zero_scalar": lam0,
        "scalar": lam,
        "mismatches": len(wits),
        "shape": [[w.mode, list(w.target)] for w in wits[:8]],
    }
    if lam == 0 and any(oracle.terms):
        note = "operator vanishes where the oracle does not"
    else:
        note = None
    if not wits:
        return CheckOutcome("toy_duality", params, PASS, data=data, note=note)
    return CheckOutcome("toy_duality", params, FAIL, witness=wits[0], data=data, note=note)


def verify_toy_integrand(d: Deformation, a: int, gamma: int, m: int, r: int, K: int, W: int) -> CheckOutcome:
    """The printed moment expansion of the integrand against the x-space oracle, exactly."""
    params = {"a": a, "gamma": gamma, "m": m, "r": r, "K": K, "W": W}
    oracle = xspace_expansion(d, a, gamma, m, r, K, W)
    got = integrand_display(d, a, gamma, m, r, K, W)
    wits = moment_witnesses(oracle, got, m + W)
    if not wits:
        return CheckOutcome("toy_integrand", params, PASS)
    return CheckOutcome("toy_integrand", params, FAIL, witness=wits[0], data={"mismatches": len(wits)})


def verify_toy_form(d: Deformation, a: int, gamma: int, m: int, r: int, K: int, W: int, form: str) -> CheckOutcome:
    """General operator against the printed example (r = 2, 3, 4) or family remark, formally."""
    check_id = "toy_examples" if form == "example" else "toy_remark"
    params = {"a": a, "gamma": gamma, "m": m, "r": r, "K": K, "W": W}
    expected = make_toy_operator(d, a, gamma, m, r, K, W, form=form)
    got = make_toy_operator(d, a, gamma, m, r, K, W)
    wits = toperator_witnesses(expected, got)
    if not wits:
        return CheckOutcome(check_id, params, PASS)
    return CheckOutcome(check_id, params, FAIL, witness=wits[0], data={"mismatches": len(wits)})


# ---------------------------------------------------------------------------
# theta product


def theta_eval(d: Deformation, x, truncation: int, substitution=(1, 1)) -> Fraction:
    """Finite truncation of the two-sided theta product with G at a scalar (P, Q).

    F(x) = x and G = (q^Q - p^P)/(q^Q R(p^P, q^Q)) when R(1, 0) = 0; otherwise
    F(x) = x/(x - R(1, 0)) and G = (p(Q-P)R(pP, qQ) + (pP - qQ)R(1, 0))/(qQ R(pP, qQ)).
    """
    x = as_fraction(x)
    if x == 0:
        raise PoleHit("theta product needs x != 0")
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    P, Q = (as_fraction(v) for v in substitution)
    p, q = d.p, d.q
    R10 = d.evaluate(Fraction(1), Fraction(0))
    if R10 == 0:
        if P.denominator != 1 or Q.denominator != 1:
            raise ValueError("p^P needs an integer substitution for exact evaluation")
        den = q**Q * d.evaluate(p**P, q**Q)
        if den == 0:
            raise PoleHit("G(P, Q) has a vanishing denominator")
        G = (q**Q - p**P) / den

        def F(y):
            return y

    else:
        den = q * Q * d.evaluate(p * P, q * Q)
        if den == 0:
            raise PoleHit("G(P, Q) has a vanishing denominator")
        G = (p * (Q - P) * d.evaluate(p * P, q * Q) + (p * P - q * Q) * R10) / den

        def F(y):
            if y == R10:
                raise PoleHit(f"F has a pole at {y}")
            return y / (y - R10)

    out = Fraction(1)
    for k in range(truncation):
        out *= 1 - F((q / p) ** k * x) * G
        out *= 1 - F((q / p) ** (k + 1) / x) * G
    return out


__all__ = [
    "TOperator",
    "MomentExpr",
    "bell_coefficients",
    "bell_restricted",
    "bell_recursion",
    "rescaled_bell",
    "verify_bell_oracle",
    "verify_rescaled_times",
    "verify_det_base",
    "det_operator",
    "multi_index_det_operator",
    "power_sum_exponential",
    "verify_det_property",
    "verify_multi_index",
    "make_Wtilde",
    "wtilde_display",
    "verify_Wtilde_specializations",
    "toperator_witnesses",
    "witness_shape",
    "make_toy_operator",
    "xspace_expansion",
    "integrand_display",
    "verify_toy_duality",
    "verify_toy_integrand",
    "verify_toy_form",
    "theta_eval",
]
