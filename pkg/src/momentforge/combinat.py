"""Enumeration of the index sets behind every moment expansion.

Integer partitions index univariate sums, multi-index partitions (equivalently
multiset subdivisions) index multivariate ones, and set partitions together with
the interval and non-crossing sub-lattices carry the cumulant families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Iterator, Mapping, Sequence

from sympy.utilities.iterables import multiset_permutations, partitions as _sympy_partitions

from .kernel import ValidationError, check_cap

__all__ = [
    "IntPartition",
    "SetPartition",
    "MultiIndexPartition",
    "MultisetSubdivision",
    "integer_partitions",
    "set_partitions",
    "multiset_subdivisions",
    "multi_index_partitions",
    "vector_partitions",
    "lattice_partitions",
    "is_noncrossing",
    "is_interval",
    "named_numbers",
    "bell",
    "bernoulli",
    "euler",
    "catalan",
    "stirling1",
    "stirling2",
    "parking_functions",
    "SET_PARTITION_CAP",
]

SET_PARTITION_CAP = 12
MULTI_INDEX_CAP = 18
PARKING_CAP = 7


# --------------------------------------------------------------------------
# integer partitions


@dataclass(frozen=True)
class IntPartition:
    """A partition ``λ`` of ``weight`` into weakly decreasing ``parts``."""

    parts: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        """Number of parts, written ``ν_λ`` in the formulas."""
        return len(self.parts)

    @property
    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    @property
    def d(self) -> int:
        """Number of set partitions of ``[weight]`` with block sizes ``parts``."""
        den = 1
        for part, r in self.multiplicities.items():
            den *= math.factorial(part) ** r * math.factorial(r)
        return math.factorial(self.weight) // den

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)


@lru_cache(maxsize=None)
def _int_partitions(i: int) -> tuple[IntPartition, ...]:
    if i == 0:
        return (IntPartition(()),)
    out = []
    for p in _sympy_partitions(i):
        parts = tuple(sorted((k for k, r in p.items() for _ in range(r)), reverse=True))
        out.append(IntPartition(parts))
    out.sort(key=lambda lam: lam.parts, reverse=True)
    return tuple(out)


def integer_partitions(i: int) -> list[IntPartition]:
    """All partitions of ``i`` in reverse-lexicographic order; ``i = 0`` gives the empty one."""
    if i < 0:
        raise ValidationError("integer_partitions needs i >= 0")
    return list(_int_partitions(i))


# --------------------------------------------------------------------------
# set partitions

SetPartition = tuple[tuple[int, ...], ...]


def _restricted_growth(n: int) -> Iterator[list[int]]:
    a = [0] * n
    maxes = [0] * n

    def rec(k: int) -> Iterator[list[int]]:
        if k == n:
            yield a
            return
        top = maxes[k - 1] + 1 if k else 0
        for v in range(top + 1):
            a[k] = v
            maxes[k] = max(maxes[k - 1] if k else 0, v)
            yield from rec(k + 1)

    if n == 0:
        yield []
        return
    a[0] = 0
    maxes[0] = 0
    yield from rec(1)


def _blocks_from_rgs(rgs: Sequence[int]) -> SetPartition:
    blocks: dict[int, list[int]] = {}
    for pos, label in enumerate(rgs, start=1):
        blocks.setdefault(label, []).append(pos)
    return tuple(tuple(blocks[k]) for k in sorted(blocks))


def set_partitions(n: int) -> list[SetPartition]:
    """All set partitions of ``{1..n}``; blocks sorted by their least element."""
    if n < 1:
        raise ValidationError("set_partitions needs n >= 1")
    check_cap(n, SET_PARTITION_CAP, "set partition size")
    return [_blocks_from_rgs(r) for r in _restricted_growth(n)]


def is_interval(pi: SetPartition) -> bool:
    return all(b[-1] - b[0] + 1 == len(b) for b in pi)


def is_noncrossing(pi: SetPartition) -> bool:
    for b1, b2 in itertools.combinations(pi, 2):
        for a, c in itertools.combinations(b1, 2):
            # crossing: a < b < c < d with b, d in the other block
            inside = any(a < x < c for x in b2)
            outside = any(x < a or x > c for x in b2)
            if inside and outside:
                return False
    return True


def lattice_partitions(kind: str, n: int) -> list[SetPartition]:
    """Set partitions of ``[n]`` lying in the ``noncrossing`` or ``interval`` lattice."""
    preds: dict[str, Callable[[SetPartition], bool]] = {
        "noncrossing": is_noncrossing,
        "interval": is_interval,
        "all": lambda _p: True,
    }
    if kind not in preds:
        raise ValidationError(f"unknown lattice kind {kind!r}")
    if kind == "interval":
        # compositions of n; no need to filter Bell(n) objects
        if n < 1:
            raise ValidationError("lattice_partitions needs n >= 1")
        check_cap(n, SET_PARTITION_CAP, "set partition size")
        out = []
        for cuts in itertools.product((0, 1), repeat=n - 1):
            blocks, cur = [], [1]
            for pos, cut in enumerate(cuts, start=2):
                if cut:
                    blocks.append(tuple(cur))
                    cur = [pos]
                else:
                    cur.append(pos)
            blocks.append(tuple(cur))
            out.append(tuple(blocks))
        return sorted(out)
    pred = preds[kind]
    return [p for p in set_partitions(n) if pred(p)]


# --------------------------------------------------------------------------
# vector (multi-index) partitions

Vector = tuple[int, ...]


def _boxes_desc(bound: Vector, upper: Vector | None) -> Iterator[Vector]:
    """Nonzero vectors ``v <= bound`` componentwise, ``v <= upper`` lexicographically, descending."""
    ranges = [range(b, -1, -1) for b in bound]
    for v in itertools.product(*ranges):
        if upper is not None and v > upper:
            continue
        if any(v):
            yield v


def vector_partitions(
    target: Sequence[int],
    block_ok: Callable[[Vector], bool] | None = None,
) -> Iterator[tuple[Vector, ...]]:
    """Multisets of nonzero vectors summing to ``target``, as ascending tuples of columns.

    ``block_ok`` prunes candidate columns before recursion; this is the hook for
    discarding blocks that are known to contribute zero.
    """
    target = tuple(target)

    def rec(rest: Vector, upper: Vector | None) -> Iterator[list[Vector]]:
        if not any(rest):
            yield []
            return
        for v in _boxes_desc(rest, upper):
            if block_ok is not None and not block_ok(v):
                continue
            nxt = tuple(r - x for r, x in zip(rest, v))
            for tail in rec(nxt, v):
                yield [v] + tail

    for cols in rec(target, None):
        yield tuple(reversed(cols))


@dataclass(frozen=True)
class MultiIndexPartition:
    """Columns in lexicographic order whose componentwise sum is ``target``."""

    target: tuple[int, ...]
    columns: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        """``l(Λ)``: the number of columns."""
        return len(self.columns)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """``m(Λ)``: repeat counts of distinct columns, in column order."""
        out: list[int] = []
        prev = None
        for c in self.columns:
            if c == prev:
                out[-1] += 1
            else:
                out.append(1)
                prev = c
        return tuple(out)

    @property
    def weight(self) -> int:
        """``i!/(m(Λ)! Λ!)``: set partitions of the labelled multiset collapsing to these columns."""
        num = 1
        for t in self.target:
            num *= math.factorial(t)
        den = 1
        for r in self.multiplicities:
            den *= math.factorial(r)
        for c in self.columns:
            for x in c:
                den *= math.factorial(x)
        return num // den


def multi_index_partitions(i: Sequence[int]) -> list[MultiIndexPartition]:
    """All multi-index partitions of ``i`` in canonical order."""
    target = tuple(int(x) for x in i)
    if not target or any(x < 0 for x in target):
        raise ValidationError("multi-index must be a non-empty tuple of non-negative integers")
    check_cap(sum(target), MULTI_INDEX_CAP, "multi-index total order")
    return _multi_index_partitions(target)


@lru_cache(maxsize=256)
def _mip_cached(target: tuple[int, ...]) -> tuple[MultiIndexPartition, ...]:
    parts = [MultiIndexPartition(target, cols) for cols in vector_partitions(target)]
    parts.sort(key=lambda p: (p.length, p.columns))
    return tuple(parts)


def _multi_index_partitions(target: tuple[int, ...]) -> list[MultiIndexPartition]:
    return list(_mip_cached(target))


# --------------------------------------------------------------------------
# multiset subdivisions

Multiset = tuple[tuple[Hashable, int], ...]


@dataclass(frozen=True)
class MultisetSubdivision:
    """Distinct sub-multisets ``blocks`` with repeat counts ``g``; ``d`` is ``d_S``."""

    blocks: tuple[Multiset, ...]
    g: tuple[int, ...]
    d: int

    @property
    def size(self) -> int:
        """``|S|``: total number of blocks counted with repetition."""
        return sum(self.g)


def _as_multiset(M: Sequence[Hashable] | Mapping[Hashable, int]) -> Multiset:
    if isinstance(M, Mapping):
        items = [(k, int(v)) for k, v in M.items() if v]
    else:
        counts: dict[Hashable, int] = {}
        for s in M:
            counts[s] = counts.get(s, 0) + 1
        items = list(counts.items())
    return tuple(sorted(items, key=lambda kv: str(kv[0])))


def multiset_subdivisions(M: Sequence[Hashable] | Mapping[Hashable, int]) -> list[MultisetSubdivision]:
    """All subdivisions of the multiset ``M`` with their coefficients ``d_S``.

    ``M`` may be a list of symbols with repetition or a symbol → multiplicity map.
    """
    ms = _as_multiset(M)
    if not ms:
        raise ValidationError("multiset must be non-empty")
    symbols = [s for s, _ in ms]
    target = tuple(m for _, m in ms)
    out = []
    for lam in multi_index_partitions(target):
        blocks: list[Multiset] = []
        g: list[int] = []
        prev = None
        for col in lam.columns:
            if col == prev:
                g[-1] += 1
                continue
            prev = col
            blocks.append(tuple((s, c) for s, c in zip(symbols, col) if c))
            g.append(1)
        out.append(MultisetSubdivision(tuple(blocks), tuple(g), lam.weight))
    return out


# --------------------------------------------------------------------------
# named numbers


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind: ``(x)_n = Σ s(n,k) x^k``."""
    if n == k:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    return sum(stirling2(n, k) for k in range(n + 1))


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers from ``Σ_{k<=n} C(n+1,k) B_k = 0``, so ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    acc = sum((math.comb(n + 1, k) * bernoulli(k) for k in range(n)), Fraction(0))
    return -acc / (n + 1)


@lru_cache(maxsize=None)
def euler(n: int) -> int:
    """Euler (secant) numbers with ``sech z = Σ E_n z^n/n!``: 1, 0, -1, 0, 5, ..."""
    if n == 0:
        return 1
    if n % 2:
        return 0
    return -sum(math.comb(n, k) * euler(k) for k in range(0, n, 2))


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def _mobius_pi(n: int) -> int:
    """``μ(0̂, 1̂)`` in the lattice of set partitions of ``[n]``."""
    return (-1) ** (n - 1) * math.factorial(n - 1)


_NAMED: dict[str, Callable[..., int | Fraction]] = {
    "bell": bell,
    "bernoulli": bernoulli,
    "euler": euler,
    "catalan": catalan,
    "stirling1": stirling1,
    "stirling2": stirling2,
    "mobius_pi": _mobius_pi,
}

_ARITY = {"stirling1": 2, "stirling2": 2}


def named_numbers(kind: str, *indices: int) -> Fraction:
    """Exact value of a named combinatorial sequence, e.g. ``named_numbers("stirling2", 4, 2)``."""
    if kind not in _NAMED:
        raise ValidationError(f"unknown number kind {kind!r}")
    want = _ARITY.get(kind, 1)
    if len(indices) != want or any(int(i) != i or i < 0 for i in indices):
        raise ValidationError(f"{kind} takes {want} non-negative integer index(es)")
    if kind == "mobius_pi" and indices[0] < 1:
        raise ValidationError("mobius_pi needs n >= 1")
    return Fraction(_NAMED[kind](*indices))


# --------------------------------------------------------------------------
# parking functions


def parking_functions(n: int) -> list[tuple[int, ...]]:
    """All parking functions of length ``n`` (values in ``1..n``), sorted lexicographically."""
    if n < 1:
        raise ValidationError("parking_functions needs n >= 1")
    check_cap(n, PARKING_CAP, "parking function length")
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int]) -> Iterator[list[int]]:
        k = len(prefix)
        if k == n:
            yield prefix
            return
        lo = prefix[-1] if prefix else 1
        for v in range(lo, k + 2):
            yield from rec(prefix + [v])

    for base in rec([]):
        out.extend(tuple(p) for p in multiset_permutations(base))
    out.sort()
    return out
