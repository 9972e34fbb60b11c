"""Multivariate moments: dot products, Faà di Bruno compositions, cumulants,
Hermite and Bernoulli polynomials.

A multivariate umbra ``μ`` is a :class:`MultiMomentTable`. Univariate moment
sequences are accepted wherever a one-dimensional table is.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence

from sympy import Matrix, Rational as SymRational

from .combinat import bernoulli, multi_index_partitions
from .kernel import Poly, ValidationError, as_rational, falling
from .umbral import MomentSeq, MultiMomentTable, multi_indices

__all__ = [
    "MultiMomentTable",
    "CovarianceSpec",
    "multi_indices",
    "multivariate_dot",
    "multivariate_composition",
    "multivariate_cumulants",
    "multivariate_hermite",
    "multivariate_bernoulli",
    "quadratic_table",
    "bernoulli_table",
    "process_table",
    "lower_x",
]

MultiIndex = tuple[int, ...]


def _param(t: Any) -> Any:
    if isinstance(t, str):
        try:
            return as_rational(t)
        except ValidationError:
            return Poly.var(t)
    if isinstance(t, int):
        return Fraction(t)
    return t


def _as_table(x: Any) -> MultiMomentTable:
    if isinstance(x, MultiMomentTable):
        return x
    if isinstance(x, MomentSeq):
        return MultiMomentTable.from_moment_seq(x)
    if isinstance(x, dict):
        return MultiMomentTable(x)
    return MultiMomentTable({(i,): v for i, v in enumerate(x)}, 1)


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, Fraction))


def _multi_binom(v: Sequence[int], j: Sequence[int]) -> int:
    return math.prod(math.comb(a, b) for a, b in zip(v, j))


def _below(v: Sequence[int]) -> Iterator[MultiIndex]:
    return itertools.product(*(range(x + 1) for x in v))


def multivariate_dot(mu: Any, m: Any, i: Sequence[int]) -> Any:
    """``E[(m·μ)^i] = Σ_{Λ⊨i} i!/(m(Λ)! Λ!) (m)_{l(Λ)} Π_cols E[μ^col]``."""
    table = _as_table(mu)
    idx = tuple(int(x) for x in i)
    if len(idx) != table.dim:
        raise ValidationError(f"index {idx} does not match table dimension {table.dim}")
    m = _param(m)
    if not any(idx):
        return Fraction(1) if _is_number(m) else Poly.const(1)
    total: Any = Fraction(0)
    for lam in multi_index_partitions(idx):
        prod: Any = Fraction(1)
        for col in lam.columns:
            prod = prod * table[col]
            if prod == 0:
                break
        if prod == 0:
            continue
        total = total + falling(m, lam.length) * lam.weight * prod
    return total


def _compositions(i: MultiIndex, k: int) -> Iterator[tuple[MultiIndex, ...]]:
    """Ordered splits ``i = i_1 + ... + i_k`` into ``k`` non-negative multi-indices."""
    if k == 1:
        yield (i,)
        return
    for first in _below(i):
        rest = tuple(a - b for a, b in zip(i, first))
        for tail in _compositions(rest, k - 1):
            yield (first,) + tail


def multivariate_composition(outer: Any, inners: Any, i: Sequence[int]) -> Any:
    """Moment ``i`` of the composition ``outer·β·(inner_1, ..., inner_k)``.

    ``outer`` is a moment sequence (arity 1) or a ``k``-dimensional table;
    ``inners`` is one table (reused, as uncorrelated copies, for every outer
    coordinate) or a list of ``k`` tables sharing one arity ``d``. Covers the
    univariate-outer, univariate-inner, shared-inner and per-coordinate-inner
    cases with a single formula:

        Σ_{i = i_1+...+i_k} Σ_{Λ_s ⊨ i_s} i!/Π_s(m(Λ_s)! Λ_s!) outer[l(Λ_1),...,l(Λ_k)] Π_s Π_cols inner_s[col]
    """
    out_t = _as_table(outer)
    k = out_t.dim
    if isinstance(inners, (list, tuple)) and inners and not _is_number(inners[0]) and not isinstance(inners[0], Fraction):
        inner_list = [_as_table(t) for t in inners]
    else:
        inner_list = [_as_table(inners)]
    if len(inner_list) == 1 and k > 1:
        inner_list = inner_list * k
    if len(inner_list) != k:
        raise ValidationError(f"outer arity {k} needs 1 or {k} inner tables, got {len(inner_list)}")
    d = inner_list[0].dim
    if any(t.dim != d for t in inner_list):
        raise ValidationError("inner tables must share one arity")
    idx = tuple(int(x) for x in i)
    if len(idx) != d:
        raise ValidationError(f"index {idx} does not match inner arity {d}")
    if not any(idx):
        return Fraction(1)
    i_fact = math.prod(math.factorial(x) for x in idx)
    total: Any = Fraction(0)
    for split in _compositions(idx, k):
        options = []
        for s, part in enumerate(split):
            if not any(part):
                options.append([(0, Fraction(1), Fraction(1))])
                continue
            opts = []
            for lam in multi_index_partitions(part):
                prod: Any = Fraction(1)
                for col in lam.columns:
                    prod = prod * inner_list[s][col]
                if prod == 0:
                    continue
                # lam.weight = part!/(m! Λ!), so divide the part! back out
                w = Fraction(lam.weight, math.prod(math.factorial(x) for x in part))
                opts.append((lam.length, w, prod))
            options.append(opts)
        for combo in itertools.product(*options):
            lengths = tuple(c[0] for c in combo)
            g = out_t[lengths]
            if g == 0:
                continue
            term: Any = g * i_fact
            for _, w, prod in combo:
                term = term * w * prod
            total = total + term
    return total


def _outer_from_fn(fn: Any, order: int) -> MomentSeq | tuple[Any, ...]:
    vals = [Fraction(1)] + [fn(l) for l in range(1, order + 1)]
    if all(_is_number(v) for v in vals):
        return MomentSeq(tuple(vals))
    return tuple(vals)


def multivariate_cumulants(mu: Any, order: int, *, inverse: bool = False) -> MultiMomentTable:
    """Joint cumulants of ``μ`` up to total ``order`` (or moments from cumulants with ``inverse=True``).

    Forward: compose with outer moments ``(-1)^{l-1}(l-1)!`` (the umbra ``χ·χ``).
    Inverse: compose with the unity umbra. The zero-index entry is set to 1.
    """
    table = _as_table(mu)
    if order > table.order:
        raise ValidationError(f"order {order} exceeds table order {table.order}")
    if inverse:
        outer = MomentSeq((Fraction(1),) * (order + 1))
    else:
        outer = MomentSeq((Fraction(1),) + tuple(Fraction((-1) ** (l - 1) * math.factorial(l - 1)) for l in range(1, order + 1)))
    entries = {}
    for idx in multi_indices(table.dim, order):
        entries[idx] = multivariate_composition(outer, table, idx) if any(idx) else Fraction(1)
    return MultiMomentTable(entries, table.dim)


# --------------------------------------------------------------------------
# Hermite and Bernoulli polynomials


def _sym_to_fraction(x: Any) -> Fraction:
    r = SymRational(x)
    return Fraction(int(r.p), int(r.q))


@dataclass(frozen=True)
class CovarianceSpec:
    """Symmetric covariance ``Σ`` with an optional exact factor ``C`` (``C C' = Σ``)."""

    sigma: tuple[tuple[Fraction, ...], ...]
    factor: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self) -> None:
        rows = tuple(tuple(as_rational(v) for v in row) for row in self.sigma)
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise ValidationError("sigma must be a non-empty square matrix")
        if any(rows[a][b] != rows[b][a] for a in range(k) for b in range(k)):
            raise ValidationError("sigma must be symmetric")
        object.__setattr__(self, "sigma", rows)
        if self.factor is not None:
            C = tuple(tuple(as_rational(v) for v in row) for row in self.factor)
            if len(C) != k:
                raise ValidationError("factor must have as many rows as sigma")
            cc = [[sum((C[a][j] * C[b][j] for j in range(len(C[a]))), Fraction(0)) for b in range(k)] for a in range(k)]
            if any(cc[a][b] != rows[a][b] for a in range(k) for b in range(k)):
                raise ValidationError("factor does not satisfy C C' = sigma")
            object.__setattr__(self, "factor", C)

    @property
    def dim(self) -> int:
        return len(self.sigma)

    def inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        M = Matrix([[SymRational(v.numerator, v.denominator) for v in row] for row in self.sigma])
        if M.det() == 0:
            raise ValidationError("sigma is singular")
        inv = M.inv()
        return tuple(tuple(_sym_to_fraction(inv[a, b]) for b in range(self.dim)) for a in range(self.dim))


def quadratic_table(sigma: Sequence[Sequence[Any]], order: int) -> MultiMomentTable:
    """Table with generating function ``1 + z Σ z' / 2``: only total-order-2 entries are nonzero."""
    k = len(sigma)
    entries: dict[MultiIndex, Fraction] = {}
    for idx in multi_indices(k, order):
        if sum(idx) != 2:
            entries[idx] = Fraction(1) if not any(idx) else Fraction(0)
            continue
        nz = [a for a, x in enumerate(idx) if x]
        a, b = (nz[0], nz[0]) if len(nz) == 1 else (nz[0], nz[1])
        entries[idx] = as_rational(sigma[a][b])
    return MultiMomentTable(entries, k)


def process_table(mu: Any, t: Any, order: int) -> MultiMomentTable | dict[MultiIndex, Any]:
    """Moments of ``t·β·μ`` up to total ``order`` (outer moments ``t^l``)."""
    table = _as_table(mu)
    tt = _param(t)
    outer = _outer_from_fn(lambda l: tt**l, order)
    out = {idx: multivariate_composition(outer, table, idx) for idx in multi_indices(table.dim, order)}
    if all(_is_number(v) for v in out.values()):
        return MultiMomentTable(out, table.dim)
    return out


def _xvars(k: int) -> list[Poly]:
    return [Poly.var(f"x{a + 1}") for a in range(k)]


def _monomial(xs: Sequence[Any], j: Sequence[int]) -> Any:
    out: Any = Poly.const(1)
    for x, e in zip(xs, j):
        if e:
            out = out * x**e
    return out


def _hermite_tilde(i: MultiIndex, sigma: Sequence[Sequence[Any]], xs: Sequence[Any], t: Any) -> Poly:
    table = quadratic_table(sigma, sum(i))
    outer = _outer_from_fn(lambda l: (-t) ** l, sum(i))
    out = Poly()
    for j in _below(i):
        rest = tuple(a - b for a, b in zip(i, j))
        coef = multivariate_composition(outer, table, rest) if any(rest) else Fraction(1)
        if coef == 0:
            continue
        out = out + _monomial(xs, j) * coef * _multi_binom(i, j)
    return out


def multivariate_hermite(i: Sequence[int], sigma: CovarianceSpec | Sequence[Sequence[Any]], variant: str = "H~", *, t: Any = 1) -> Poly:
    """Multivariate Hermite polynomial in ``x1..xk``.

    ``variant="H~"``: ``E[(x - t·β·μ)^i]`` with ``f(μ,z) = 1 + z Σ z'/2``.
    ``variant="H"``: the same with ``Σ^{-1}`` in place of ``Σ`` and ``x`` replaced
    by ``x Σ^{-1}``. ``t`` defaults to 1; keeping it symbolic exposes the
    time-space harmonic structure.
    """
    spec = sigma if isinstance(sigma, CovarianceSpec) else CovarianceSpec(tuple(tuple(r) for r in sigma))
    idx = tuple(int(x) for x in i)
    if len(idx) != spec.dim:
        raise ValidationError(f"index {idx} does not match dimension {spec.dim}")
    tt = _param(t)
    xs = _xvars(spec.dim)
    if variant in ("H~", "Htilde", "tilde"):
        return _hermite_tilde(idx, spec.sigma, xs, tt)
    if variant == "H":
        inv = spec.inverse()
        ys = [sum((xs[a] * inv[a][b] for a in range(spec.dim)), Poly()) for b in range(spec.dim)]
        return _hermite_tilde(idx, inv, ys, tt)
    raise ValidationError(f"unknown Hermite variant {variant!r}")


def bernoulli_table(k: int, order: int) -> MultiMomentTable:
    """Fully correlated tuple ``(ι, ..., ι)``: entry ``j`` is ``B_{|j|}``."""
    return MultiMomentTable({idx: bernoulli(sum(idx)) for idx in multi_indices(k, order)}, k)


def multivariate_bernoulli(v: Sequence[int], t: Any = "t") -> Poly:
    """``B_v^{(t)}(x) = E[(x + t·𝛊)^v]`` with ``𝛊 = (ι, ..., ι)``."""
    idx = tuple(int(x) for x in v)
    if not idx or any(x < 0 for x in idx):
        raise ValidationError("v must be a non-empty multi-index")
    k = len(idx)
    table = bernoulli_table(k, sum(idx))
    tt = _param(t)
    xs = _xvars(k)
    out = Poly()
    for j in _below(idx):
        rest = tuple(a - b for a, b in zip(idx, j))
        coef = multivariate_dot(table, tt, rest)
        if coef == 0:
            continue
        out = out + _monomial(xs, j) * coef * _multi_binom(idx, j)
    return out


def lower_x(poly: Poly, moment: Any, k: int) -> Poly:
    """Replace ``x1^{j1}⋯xk^{jk}`` by ``moment((j1..jk))``."""
    names = [f"x{a + 1}" for a in range(k)]
    return poly.lower(names, lambda e: moment(e))
