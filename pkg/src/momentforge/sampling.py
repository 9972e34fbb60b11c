"""Symbolic expectations of sample statistics, k-statistics and polykays.

Power sums ``S_r = Σ_j X_j^r`` of a sample of size ``n`` are the symbols
``S1, S2, ...``; estimator coefficients are rational functions of ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Mapping, Sequence

from .combinat import (
    IntPartition,
    integer_partitions,
    multi_index_partitions,
    stirling2,
    vector_partitions,
)
from .kernel import (
    Poly,
    RationalFunctionInN,
    ValidationError,
    check_cap,
    falling,
    symbol_key,
)

__all__ = [
    "Factor",
    "expectation_of_product",
    "moment_symbol",
    "power_sum_expectation",
    "expectation_of_statistic",
    "cumulant_in_moments",
    "power_to_augmented",
    "k_statistic",
    "polykay",
    "moments_polykays_mobius",
    "evaluate_on_sample",
    "KSTAT_CAP",
]

KSTAT_CAP = 20
EXPECTATION_CAP = 16


# --------------------------------------------------------------------------
# expectations of products of dot-factors


@dataclass(frozen=True)
class Factor:
    """One factor ``n·(μ_1^{e_1} ⋯ μ_k^{e_k})`` of a product whose expectation is wanted.

    Factors sharing a ``singleton`` tag stand for correlated singleton umbrae:
    any block containing two of them contributes zero.
    """

    exponents: tuple[int, ...]
    singleton: Hashable | None = None

    def __post_init__(self) -> None:
        exps = tuple(int(e) for e in self.exponents)
        if not exps or any(e < 0 for e in exps) or not any(exps):
            raise ValidationError("a factor needs a nonzero vector of non-negative exponents")
        object.__setattr__(self, "exponents", exps)


def moment_symbol(idx: Sequence[int]) -> str:
    """``a3`` for a univariate index, ``m_2_1`` for a joint one."""
    if len(idx) == 1:
        return f"a{idx[0]}"
    return "m_" + "_".join(str(x) for x in idx)


def _as_factor(f: Any) -> Factor:
    if isinstance(f, Factor):
        return f
    if isinstance(f, int):
        return Factor((f,))
    return Factor(tuple(f))


def expectation_of_product(
    factors: Sequence[Factor | Sequence[int] | int],
    joints: Mapping[tuple[int, ...], Any] | Callable[[tuple[int, ...]], Any] | None = None,
    *,
    n: Any = None,
) -> Poly:
    """``E[Π_f n·μ^{e_f}]`` as ``Σ_S d_S (n)_{|S|} Π_blocks m_{block}``.

    The sum runs over subdivisions of the multiset of factors; a block's joint
    moment is indexed by the sum of its factors' exponent vectors. ``joints``
    maps those indices to values (missing keys are an error) or is omitted,
    in which case moment symbols from :func:`moment_symbol` are used.
    ``n`` defaults to the sample-size indeterminate.
    """
    fs = [_as_factor(f) for f in factors]
    if not fs:
        return Poly.const(1)
    dim = len(fs[0].exponents)
    if any(len(f.exponents) != dim for f in fs):
        raise ValidationError("all factors need exponent vectors of one length")
    check_cap(sum(sum(f.exponents) for f in fs), EXPECTATION_CAP, "total degree")

    kinds: list[Factor] = []
    counts: list[int] = []
    for f in fs:
        if f in kinds:
            counts[kinds.index(f)] += 1
        else:
            kinds.append(f)
            counts.append(1)

    tagged = [(j, f.singleton) for j, f in enumerate(kinds) if f.singleton is not None]

    def block_ok(col: tuple[int, ...]) -> bool:
        seen: dict[Hashable, int] = {}
        for j, tag in tagged:
            if col[j]:
                seen[tag] = seen.get(tag, 0) + col[j]
                if seen[tag] > 1:
                    return False
        return True

    def joint(idx: tuple[int, ...]) -> Poly:
        if joints is None:
            return Poly.var(moment_symbol(idx))
        if callable(joints):
            v = joints(idx)
        else:
            if idx not in joints:
                raise ValidationError(f"undeclared joint moment at {idx}")
            v = joints[idx]
        return v if isinstance(v, Poly) else Poly.const(v)

    nn = RationalFunctionInN.n() if n is None else n
    target = tuple(counts)
    total = Poly()
    cache: dict[tuple[int, ...], Poly] = {}
    fall: dict[int, Any] = {}
    num = math.prod(math.factorial(c) for c in target)
    for cols in vector_partitions(target, block_ok if tagged else None):
        den = 1
        prev, run = None, 0
        term = Poly.const(1)
        for col in cols:
            if col == prev:
                run += 1
            else:
                den *= math.factorial(run)
                prev, run = col, 1
            for c in col:
                den *= math.factorial(c)
            idx = tuple(sum(col[j] * kinds[j].exponents[a] for j in range(len(kinds))) for a in range(dim))
            if idx not in cache:
                cache[idx] = joint(idx)
            term = term * cache[idx]
        den *= math.factorial(run)
        length = len(cols)
        if length not in fall:
            fall[length] = RationalFunctionInN.falling_n(length) if n is None else falling(nn, length)
        total = total + term * (fall[length] * Fraction(num, den))
    return total


def power_sum_expectation(mono: Mapping[int, int] | Sequence[tuple[int, int]]) -> Poly:
    """``E[Π S_r^{j_r}]`` in the moment symbols ``a1, a2, ...``."""
    items = mono.items() if isinstance(mono, Mapping) else mono
    factors: list[int] = []
    for r, j in items:
        factors.extend([int(r)] * int(j))
    return expectation_of_product(factors)


def expectation_of_statistic(stat: Poly) -> Poly:
    """Replace every power-sum monomial of ``stat`` by its expectation."""
    out = Poly()
    for mono, coef in stat.items():
        spec = []
        for name, e in mono:
            if not name.startswith("S"):
                raise ValidationError(f"unexpected symbol {name} in a sample statistic")
            spec.append((int(name[1:]), e))
        out = out + power_sum_expectation(spec) * coef
    return out


def cumulant_in_moments(i: int) -> Poly:
    """Classical cumulant ``c_i`` as a polynomial in ``a1..ai``."""
    out = Poly()
    for lam in integer_partitions(i):
        nu = lam.length
        term = Poly.const((-1) ** (nu - 1) * math.factorial(nu - 1) * lam.d)
        for part, r in lam.multiplicities.items():
            term = term * Poly.var(f"a{part}") ** r
        out = out + term
    return out


# --------------------------------------------------------------------------
# single power to augmented powers


def power_to_augmented(i: int, m: Any = None) -> list[tuple[IntPartition, Any]]:
    """Expansion of ``(m·α)^i`` over products ``Π_j [n·(χα^j)]^{r_j}``.

    Each entry is ``(λ, d_λ (m)_{ν_λ} / (n)_{ν_λ})``. With ``m=None`` the
    coefficient is a polynomial in the symbol ``m`` with coefficients in ``n``;
    ``m="n"`` gives the plain ``d_λ``; an integer ``m`` gives a rational
    function of ``n``.
    """
    check_cap(i, KSTAT_CAP, "power order")
    out: list[tuple[IntPartition, Any]] = []
    for lam in integer_partitions(i):
        nu = lam.length
        inv = RationalFunctionInN(1) / RationalFunctionInN.falling_n(nu)
        if m is None:
            coef: Any = falling(Poly.var("m"), nu) * (inv * lam.d)
        elif m == "n":
            coef = Fraction(lam.d)
        else:
            coef = inv * (falling(Fraction(m), nu) * lam.d)
        out.append((lam, coef))
    return out


# --------------------------------------------------------------------------
# fast k-statistics and polykays


def _w(k: int) -> int:
    """``E[(χ·χ)^k] = (-1)^{k-1}(k-1)!``."""
    return (-1) ** (k - 1) * math.factorial(k - 1)


def _rf_from_weighted(coeffs: Mapping[int, Fraction]) -> RationalFunctionInN:
    """``Σ_K c_K / (n)_K`` as one reduced rational function."""
    if not coeffs:
        return RationalFunctionInN(0)
    top = max(coeffs)
    numer = [Fraction(0)] * (top + 1)
    for K, c in coeffs.items():
        if not c:
            continue
        # multiply c by (n-K)(n-K-1)...(n-top+1), so every term sits over (n)_top
        poly = [c]
        for j in range(K, top):
            shifted = [Fraction(0)] + poly
            for t, v in enumerate(poly):
                shifted[t] -= j * v
            poly = shifted
        for t, v in enumerate(poly):
            numer[t] += v
    denom = [Fraction(1)]
    for j in range(top):
        nxt = [Fraction(0)] + denom
        for t, v in enumerate(denom):
            nxt[t] -= j * v
        denom = nxt
    return RationalFunctionInN.from_coefficients(numer, denom)


def _p_poly(j: int) -> list[Fraction]:
    """Coefficients of ``p_j(y) = Σ_k (-1)^{k-1}(k-1)! S(j,k) y^k``."""
    return [Fraction(0)] + [Fraction(_w(k) * stirling2(j, k)) for k in range(1, j + 1)]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _s_monomial(sizes: Sequence[int]) -> tuple[tuple[str, int], ...]:
    d: dict[str, int] = {}
    for s in sizes:
        d[f"S{s}"] = d.get(f"S{s}", 0) + 1
    return tuple(sorted(d.items(), key=lambda kv: symbol_key(kv[0])))


def k_statistic(i: int) -> Poly:
    """The ``i``-th k-statistic in the power sums ``S1..Si``.

    ``k_i = Σ_{λ⊢i} d_λ eval(Π_j p_{λ_j}(y)) S_λ`` where the product of the
    ``p_j`` is expanded as a single polynomial in ``y`` before ``y^K`` is
    replaced by ``(-1)^{K-1}(K-1)!/(n)_K``.
    """
    if i < 1:
        raise ValidationError("k_statistic needs i >= 1")
    check_cap(i, KSTAT_CAP, "k-statistic order")
    p_cache: dict[int, list[Fraction]] = {}
    terms: dict[Any, Any] = {}
    for lam in integer_partitions(i):
        prod = [Fraction(1)]
        for part in lam.parts:
            if part not in p_cache:
                p_cache[part] = _p_poly(part)
            prod = _poly_mul(prod, p_cache[part])
        weighted = {K: lam.d * c * _w(K) for K, c in enumerate(prod) if c and K}
        coef = _rf_from_weighted(weighted)
        if coef != 0:
            terms[_s_monomial(lam.parts)] = coef
    return Poly(terms)


def _column_poly(v: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
    """``P_v(y) = Σ_k Π_j S(v_j,k_j) (-1)^{K-1}(K-1)! Π_j y_j^{k_j}``, ``K = Σ k_j``."""
    ranges = [range(1, x + 1) if x else range(0, 1) for x in v]
    out: dict[tuple[int, ...], Fraction] = {}

    def rec(j: int, ks: list[int], c: int) -> None:
        if j == len(v):
            out[tuple(ks)] = Fraction(c * _w(sum(ks)))
            return
        for k in ranges[j]:
            rec(j + 1, ks + [k], c * stirling2(v[j], k))

    rec(0, [], 1)
    return out


def _mpoly_mul(a: Mapping[tuple[int, ...], Fraction], b: Mapping[tuple[int, ...], Fraction]) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return out


def polykay(indices: Sequence[int]) -> Poly:
    """Polykay ``k_{r_1,...,r_s}``: the symmetric unbiased estimator of ``c_{r_1} ⋯ c_{r_s}``.

    Multi-index partitions ``Λ`` of ``(r_1..r_s)`` replace the integer partitions
    of the single-index case. Column ``v`` contributes ``P_v(y_1..y_s)``; after
    multiplying the columns, ``Π_j y_j^{K_j}`` is evaluated as
    ``Π_j (-1)^{K_j-1}(K_j-1)! / (n)_{ΣK_j}``.
    """
    idx = tuple(int(r) for r in indices)
    if not idx or any(r < 1 for r in idx):
        raise ValidationError("polykay needs at least one positive index")
    check_cap(sum(idx), KSTAT_CAP, "polykay total order")
    if len(idx) == 1:
        return k_statistic(idx[0])
    col_cache: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
    acc: dict[Any, dict[int, Fraction]] = {}
    for lam in multi_index_partitions(idx):
        prod: dict[tuple[int, ...], Fraction] = {(0,) * len(idx): Fraction(1)}
        for col in lam.columns:
            if col not in col_cache:
                col_cache[col] = _column_poly(col)
            prod = _mpoly_mul(prod, col_cache[col])
        weighted: dict[int, Fraction] = {}
        for ks, c in prod.items():
            if not c:
                continue
            val = c * math.prod(_w(k) for k in ks)
            K = sum(ks)
            weighted[K] = weighted.get(K, Fraction(0)) + lam.weight * val
        mono = _s_monomial([sum(col) for col in lam.columns])
        bucket = acc.setdefault(mono, {})
        for K, c in weighted.items():
            bucket[K] = bucket.get(K, Fraction(0)) + c
    terms = {}
    for mono, weighted in acc.items():
        coef = _rf_from_weighted(weighted)
        if coef != 0:
            terms[mono] = coef
    return Poly(terms)


# --------------------------------------------------------------------------
# products of moments and polykays over a set partition


def _refinements(pi: Sequence[Sequence[int]]) -> list[list[list[list[int]]]]:
    """All refinements of ``pi``, as one set partition per block."""
    from sympy.utilities.iterables import multiset_partitions

    per_block = [[list(map(list, q)) for q in multiset_partitions(list(b))] for b in pi]
    out: list[list[list[list[int]]]] = [[]]
    for options in per_block:
        out = [acc + [opt] for acc in out for opt in options]
    return out


def moments_polykays_mobius(direction: str, pi: Sequence[Sequence[int]]) -> Poly:
    """Expand over the refinements ``τ <= π``.

    ``direction="products"`` gives ``a_π = Σ_τ c_τ``; ``direction="polykays"``
    gives ``c_π = Σ_τ μ(τ,π) a_τ`` with
    ``μ(τ,π) = Π_{B∈π} (-1)^{k_B-1}(k_B-1)!`` (``k_B`` = number of blocks of ``τ``
    inside ``B``). Symbols are ``a<j>`` and ``c<j>`` indexed by block size.
    """
    blocks = [tuple(b) for b in pi]
    flat = [x for b in blocks for x in b]
    if not blocks or any(not b for b in blocks) or len(set(flat)) != len(flat):
        raise ValidationError("pi must be a set partition with non-empty disjoint blocks")
    check_cap(len(flat), 12, "set partition size")
    if direction not in ("products", "polykays"):
        raise ValidationError("direction must be 'products' or 'polykays'")
    src = "c" if direction == "products" else "a"
    out = Poly()
    for ref in _refinements(blocks):
        coef = 1
        term = Poly.const(1)
        for parts in ref:
            if direction == "polykays":
                coef *= _w(len(parts))
            for q in parts:
                term = term * Poly.var(f"{src}{len(q)}")
        out = out + term * coef
    return out


def evaluate_on_sample(stat: Poly, sample: Sequence[Any]) -> Fraction:
    """Plug a concrete sample into a power-sum statistic."""
    xs = [Fraction(x) for x in sample]
    n = len(xs)
    values: dict[str, Fraction] = {}
    for name in stat.symbols():
        r = int(name[1:])
        values[name] = sum((x**r for x in xs), Fraction(0))
    total = Fraction(0)
    for mono, coef in stat.items():
        c = coef.evaluate(n) if isinstance(coef, RationalFunctionInN) else coef
        term = c
        for name, e in mono:
            term *= values[name] ** e
        total += term
    return total
