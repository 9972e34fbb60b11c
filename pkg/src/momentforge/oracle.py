"""Brute-force reference computations.

Nothing in this module calls the fast expansions it is meant to check: set
partitions, Möbius functions, subdivision sums and series substitutions are all
re-derived here from first principles.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterator, Mapping, Sequence

from sympy import Symbol, ff, together
from sympy import Rational as SymRational

from .kernel import CapExceeded, Poly, RationalFunctionInN, ValidationError, as_rational, cap

__all__ = [
    "cumulants_via_lattice",
    "mobius_to_top",
    "naive_kstatistic",
    "multivariate_series_compose",
    "classical_mobius_closed_form",
]

ORACLE_CAP = 9
KSTAT_CAP = 8

Partition = tuple[tuple[int, ...], ...]


def _set_partitions(items: Sequence[Any]) -> Iterator[list[list[Any]]]:
    """Set partitions by inserting each element into an existing block or a new one."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _set_partitions(rest):
        for k in range(len(p)):
            yield p[:k] + [[first] + p[k]] + p[k + 1 :]
        yield [[first]] + p


def _canon(blocks: Sequence[Sequence[int]]) -> Partition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def _in_lattice(kind: str, p: Partition) -> bool:
    if kind == "all":
        return True
    if kind == "interval":
        return all(max(b) - min(b) + 1 == len(b) for b in p)
    if kind == "noncrossing":
        for b1 in p:
            for b2 in p:
                if b1 is b2:
                    continue
                for a, c in itertools.combinations(b1, 2):
                    for b, d in itertools.combinations(b2, 2):
                        if a < b < c < d:
                            return False
        return True
    raise ValidationError(f"unknown lattice {kind!r}")


_KIND_ALIASES = {"classical": "all", "boolean": "interval", "free": "noncrossing"}


def _lattice_kind(kind: str) -> str:
    k = _KIND_ALIASES.get(kind, kind)
    if k not in ("all", "interval", "noncrossing"):
        raise ValidationError(f"unknown lattice {kind!r}")
    return k


@lru_cache(maxsize=None)
def mobius_to_top(kind: str, n: int) -> dict[Partition, int]:
    """``μ_L(π, 1̂)`` for every ``π`` in the lattice, by the defining recursion.

    ``μ(1̂,1̂) = 1`` and ``μ(π,1̂) = -Σ_{π < σ <= 1̂} μ(σ,1̂)``; the coarsenings of
    ``π`` are the set partitions of its blocks.
    """
    kind = _lattice_kind(kind)
    if n > cap(ORACLE_CAP):
        raise CapExceeded(f"lattice size {n} exceeds oracle cap {cap(ORACLE_CAP)}")
    elements = [p for p in (_canon(q) for q in _set_partitions(list(range(1, n + 1)))) if _in_lattice(kind, p)]
    elements.sort(key=len)
    mu: dict[Partition, int] = {}
    for p in elements:
        if len(p) == 1:
            mu[p] = 1
            continue
        total = 0
        for grouping in _set_partitions(list(p)):
            if len(grouping) == len(p):
                continue  # that is p itself
            sigma = _canon([sum(g, ()) for g in grouping])
            if sigma in mu:
                total += mu[sigma]
        mu[p] = -total
    return mu


def classical_mobius_closed_form(p: Partition) -> int:
    k = len(p)
    return (-1) ** (k - 1) * math.factorial(k - 1)


def cumulants_via_lattice(a: Sequence[Any], kind: str, n: int) -> Fraction:
    """``Σ_{π∈L} μ_L(π, 1̂) a_π`` with ``a_π = Π_B a_{|B|}`` over the chosen lattice.

    ``kind`` is ``classical``/``all``, ``boolean``/``interval`` or ``free``/``noncrossing``.
    The classical case uses the closed-form Möbius value; the other two use the
    recursive computation.
    """
    lk = _lattice_kind(kind)
    if n < 1:
        raise ValidationError("n must be >= 1")
    if len(a) <= n:
        raise ValidationError(f"need moments up to order {n}")
    vals = [as_rational(x) for x in a]
    if n > cap(ORACLE_CAP):
        raise CapExceeded(f"lattice size {n} exceeds oracle cap {cap(ORACLE_CAP)}")
    total = Fraction(0)
    if lk == "all":
        for q in _set_partitions(list(range(1, n + 1))):
            prod = Fraction(1)
            for b in q:
                prod *= vals[len(b)]
            total += classical_mobius_closed_form(_canon(q)) * prod
        return total
    for p, m in mobius_to_top(lk, n).items():
        prod = Fraction(1)
        for b in p:
            prod *= vals[len(b)]
        total += m * prod
    return total


# --------------------------------------------------------------------------
# k-statistics through subdivisions of the power-sum multiset


def naive_kstatistic(i: int) -> Poly:
    """``k_i`` assembled by the subdivision route.

    For each ``λ ⊢ i`` the multiset ``P_λ`` holds one labelled copy of ``α^{λ_j}``
    per part; every set partition ``π`` of the ``ν_λ`` labels gives a block
    monomial ``Π_B S_{wt(B)}`` weighted by ``Π_B (-1)^{|B|-1}(|B|-1)!`` and by
    ``(-1)^{ν-1}(ν-1)!/(n)_ν``. Sums are formed with sympy expressions and only
    converted at the end.
    """
    if i < 1:
        raise ValidationError("i must be >= 1")
    if i > cap(KSTAT_CAP):
        raise CapExceeded(f"naive k-statistic order {i} exceeds cap {cap(KSTAT_CAP)}")
    n = Symbol("n")
    acc: dict[tuple[int, ...], Any] = {}
    for parts in _int_partitions_desc(i):
        nu = len(parts)
        d = math.factorial(i)
        for p in parts:
            d //= math.factorial(p)
        for k in set(parts):
            d //= math.factorial(parts.count(k))
        outer = SymRational((-1) ** (nu - 1) * math.factorial(nu - 1)) / ff(n, nu)
        for q in _set_partitions(list(range(nu))):
            w = 1
            weights = []
            for b in q:
                w *= (-1) ** (len(b) - 1) * math.factorial(len(b) - 1)
                weights.append(sum(parts[j] for j in b))
            key = tuple(sorted(weights))
            acc[key] = acc.get(key, 0) + d * w * outer
    out: dict[tuple[tuple[str, int], ...], Any] = {}
    for key, coef in acc.items():
        coef = together(coef)
        if coef == 0:
            continue
        mono: dict[str, int] = {}
        for wgt in key:
            mono[f"S{wgt}"] = mono.get(f"S{wgt}", 0) + 1
        num, den = coef.as_numer_denom()
        out[tuple(sorted(mono.items(), key=lambda kv: int(kv[0][1:])))] = _sym_to_rf(num) / _sym_to_rf(den)
    return Poly(out)


def _sym_to_rf(expr: Any) -> RationalFunctionInN:
    from sympy import Poly as SymPoly

    p = SymPoly(expr, Symbol("n"))
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
    return RationalFunctionInN.from_coefficients(coeffs, [Fraction(1)])


def _int_partitions_desc(i: int) -> list[list[int]]:
    out: list[list[int]] = []

    def rec(left: int, top: int, acc: list[int]) -> None:
        if left == 0:
            out.append(acc)
            return
        for p in range(min(left, top), 0, -1):
            rec(left - p, p, acc + [p])

    rec(i, i, [])
    return out


# --------------------------------------------------------------------------
# multivariate truncated series substitution

Exp = tuple[int, ...]


def _mul(a: Mapping[Exp, Fraction], b: Mapping[Exp, Fraction], order: int) -> dict[Exp, Fraction]:
    out: dict[Exp, Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if sum(e) <= order:
                out[e] = out.get(e, Fraction(0)) + ca * cb
    return out


def _table_get(table: Any, idx: Exp) -> Any:
    if isinstance(table, Mapping):
        if idx not in table:
            raise ValidationError(f"missing table entry at {idx}")
        return table[idx]
    return table[idx]


def _arity(table: Any) -> int:
    if hasattr(table, "dim"):
        return table.dim
    if isinstance(table, Mapping):
        return len(next(iter(table)))
    return 1  # a plain univariate moment sequence


def _entry(table: Any, idx: Exp) -> Any:
    if _arity(table) == 1 and not isinstance(table, Mapping) and not hasattr(table, "dim"):
        return table[idx[0]]
    return _table_get(table, idx)


def multivariate_series_compose(outer: Any, inners: Sequence[Any] | Any, total_order: int) -> dict[Exp, Any]:
    """Moments of the composed umbra by literal series substitution.

    The inner series ``F_s(z) = Σ_j inner_s[j] z^j / j!`` (``z`` in ``d``
    variables) are substituted into ``Σ_l outer[l] w^l / l!`` as ``w_s = F_s - 1``
    and the product is re-expanded up to total degree ``total_order``. Returns
    ``{multi-index: moment}``.
    """
    k = _arity(outer)
    if not isinstance(inners, (list, tuple)):
        inners = [inners] * k
    if len(inners) == 1 and k > 1:
        inners = list(inners) * k
    if len(inners) != k:
        raise ValidationError(f"outer arity {k} needs {k} inner tables, got {len(inners)}")
    d = _arity(inners[0])
    if any(_arity(t) != d for t in inners):
        raise ValidationError("inner tables must share one arity")

    def indices(dim: int, order: int) -> list[Exp]:
        return [e for e in itertools.product(range(order + 1), repeat=dim) if sum(e) <= order]

    zero = (0,) * d
    shifted = []
    for inner in inners:
        series = {}
        for e in indices(d, total_order):
            if e == zero:
                continue
            v = _entry(inner, e)
            if v:
                series[e] = as_rational(v) / math.prod(math.factorial(x) for x in e)
        shifted.append(series)
    # powers of each shifted series, reused across outer terms
    powers: list[list[dict[Exp, Fraction]]] = []
    for series in shifted:
        row = [{zero: Fraction(1)}]
        for _ in range(total_order):
            row.append(_mul(row[-1], series, total_order))
        powers.append(row)
    result: dict[Exp, Fraction] = {}
    for l in indices(k, total_order):
        coef = _entry(outer, l)
        if not coef:
            continue
        term: dict[Exp, Fraction] = {zero: as_rational(coef) / math.prod(math.factorial(x) for x in l)}
        for s, ls in enumerate(l):
            term = _mul(term, powers[s][ls], total_order)
        for e, c in term.items():
            result[e] = result.get(e, Fraction(0)) + c
    return {e: result.get(e, Fraction(0)) * math.prod(math.factorial(x) for x in e) for e in indices(d, total_order)}
