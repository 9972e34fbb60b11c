"""Moment sequences as umbrae and the evaluation calculus on them.

Every operation here acts on evaluated moment sequences: an umbra is identified
with ``(a_0=1, a_1, ..., a_N)`` and dot products, compositions and inverses are
partition sums over those numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .combinat import (
    IntPartition,
    bell,
    bernoulli,
    catalan,
    euler,
    integer_partitions,
    multi_index_partitions,
    stirling1,
    stirling2,
)
from .kernel import Poly, ValidationError, as_rational, falling, format_rational

__all__ = [
    "MomentSeq",
    "MultiMomentTable",
    "named_umbra",
    "NAMED_UMBRAE",
    "partition_product",
    "dot_scalar",
    "dot_scalar_moments",
    "inverse_dot",
    "factorial_moments",
    "raw_from_factorial",
    "dot_umbra",
    "composition_umbra",
    "compositional_inverse",
    "disjoint_sum",
    "scale",
    "binomial_convolution",
    "levy_moments",
    "derivative_umbra",
    "primitive_umbra",
]


# --------------------------------------------------------------------------
# containers


@dataclass(frozen=True)
class MomentSeq:
    """Exact moments ``a_0 = 1, a_1, ..., a_N`` of an umbra."""

    moments: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        vals = tuple(as_rational(v) for v in self.moments)
        if not vals:
            raise ValidationError("a moment sequence needs a_0")
        if vals[0] != 1:
            raise ValidationError(f"a_0 must be 1, got {format_rational(vals[0])}")
        object.__setattr__(self, "moments", vals)

    @classmethod
    def from_tail(cls, tail: Iterable[Any]) -> "MomentSeq":
        """Build from ``a_1..a_N``; ``a_0 = 1`` is prepended."""
        return cls((Fraction(1),) + tuple(as_rational(v) for v in tail))

    @property
    def order(self) -> int:
        return len(self.moments) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.moments[i]

    def __len__(self) -> int:
        return len(self.moments)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.moments)

    def truncate(self, order: int) -> "MomentSeq":
        _need(self, order)
        return MomentSeq(self.moments[: order + 1])

    def to_json(self) -> list[str]:
        return [format_rational(v) for v in self.moments]


def _need(seq: Any, order: int) -> None:
    have = len(seq) - 1
    if order > have:
        raise ValidationError(f"order {order} requested but only {have} moments available")


MultiIndex = tuple[int, ...]


class MultiMomentTable:
    """Multivariate moments ``m_t`` indexed by multi-indices ``t``; the zero entry is 1.

    Lookups of absent entries raise instead of defaulting to zero.
    """

    __slots__ = ("dim", "_entries")

    def __init__(self, entries: Mapping[Sequence[int], Any], dim: int | None = None) -> None:
        clean: dict[MultiIndex, Any] = {}
        for key, value in entries.items():
            idx = tuple(int(x) for x in key)
            if any(x < 0 for x in idx):
                raise ValidationError(f"negative index {idx}")
            clean[idx] = value if isinstance(value, Poly) else as_rational(value)
        dims = {len(k) for k in clean}
        if dim is None:
            if len(dims) != 1:
                raise ValidationError("cannot infer the table dimension")
            dim = dims.pop()
        elif dims and dims != {dim}:
            raise ValidationError(f"all indices must have length {dim}")
        if dim < 1:
            raise ValidationError("dimension must be >= 1")
        zero = (0,) * dim
        if zero in clean and clean[zero] != 1:
            raise ValidationError("the zero-index entry must equal 1")
        clean[zero] = Fraction(1)
        self.dim = dim
        self._entries = clean

    @classmethod
    def from_function(cls, dim: int, order: int, fn: Any) -> "MultiMomentTable":
        return cls({idx: fn(idx) for idx in multi_indices(dim, order)}, dim)

    @classmethod
    def from_moment_seq(cls, seq: MomentSeq) -> "MultiMomentTable":
        return cls({(i,): v for i, v in enumerate(seq)}, 1)

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "MultiMomentTable":
        return cls({tuple(int(x) for x in k.split(",")): v for k, v in payload.items()})

    @property
    def order(self) -> int:
        return max(sum(k) for k in self._entries)

    def __getitem__(self, idx: Sequence[int]) -> Any:
        key = tuple(idx)
        try:
            return self._entries[key]
        except KeyError:
            raise ValidationError(f"missing table entry at {key}") from None

    def __contains__(self, idx: Sequence[int]) -> bool:
        return tuple(idx) in self._entries

    def keys(self) -> list[MultiIndex]:
        return sorted(self._entries, key=lambda k: (sum(k), tuple(-x for x in k)))

    def items(self) -> list[tuple[MultiIndex, Any]]:
        return [(k, self._entries[k]) for k in self.keys()]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MultiMomentTable):
            return NotImplemented
        return self.dim == other.dim and self._entries == other._entries

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict[str, str]:
        return {
            ",".join(map(str, k)): (format_rational(v) if isinstance(v, Fraction) else str(v))
            for k, v in self.items()
        }

    def __repr__(self) -> str:
        return f"MultiMomentTable(dim={self.dim}, entries={self.to_json()})"


def multi_indices(dim: int, order: int) -> list[MultiIndex]:
    """All multi-indices of length ``dim`` and total order at most ``order``."""
    out: list[MultiIndex] = []

    def rec(prefix: list[int], left: int) -> None:
        if len(prefix) == dim:
            out.append(tuple(prefix))
            return
        for v in range(left + 1):
            rec(prefix + [v], left - v)

    rec([], order)
    return sorted(out, key=lambda k: (sum(k), tuple(-x for x in k)))


# --------------------------------------------------------------------------
# named umbrae


def _seq(fn: Any, order: int) -> MomentSeq:
    return MomentSeq(tuple(Fraction(1) if i == 0 else Fraction(fn(i)) for i in range(order + 1)))


NAMED_UMBRAE: dict[str, Any] = {
    "augmentation": lambda i: 0,
    "unity": lambda i: 1,
    "singleton": lambda i: 1 if i == 1 else 0,
    "bell": bell,
    "bernoulli": bernoulli,
    "euler": euler,
    "boolean_unity": math.factorial,
    "catalan": catalan,
    "eta": lambda i: 1 if i == 2 else 0,
    "uniform": lambda i: Fraction(1, i + 1),
}

_ALIASES = {
    "epsilon": "augmentation",
    "u": "unity",
    "chi": "singleton",
    "beta": "bell",
    "iota": "bernoulli",
    "xi": "euler",
    "ubar": "boolean_unity",
    "theta": "catalan",
}


def named_umbra(name: str, order: int) -> MomentSeq:
    """Moments of a named umbra up to ``order`` (e.g. ``"bell"``, ``"singleton"``)."""
    key = _ALIASES.get(name, name)
    if key not in NAMED_UMBRAE:
        raise ValidationError(f"unknown umbra {name!r}")
    if order < 0:
        raise ValidationError("order must be >= 0")
    return _seq(NAMED_UMBRAE[key], order)


# --------------------------------------------------------------------------
# partition sums


def partition_product(values: Sequence[Any], lam: IntPartition) -> Any:
    """``a_λ = Π a_{λ_j}``."""
    out: Any = 1
    for part, r in lam.multiplicities.items():
        out = out * values[part] ** r
    return out


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, Fraction))


def _coerce_param(t: Any) -> Any:
    """Numbers become Fractions, strings become symbols, anything else passes through."""
    if isinstance(t, str):
        try:
            return as_rational(t)
        except ValidationError:
            return Poly.var(t)
    if isinstance(t, (int, Fraction)):
        return Fraction(t)
    return t


def dot_scalar(alpha: Sequence[Any], t: Any, i: int) -> Any:
    """``E[(t·α)^i] = Σ_{λ⊢i} (t)_{ν_λ} d_λ a_λ``.

    ``t`` may be a rational, a symbol name (then a :class:`Poly` is returned) or
    any object supporting ring arithmetic.
    """
    _need(alpha, i)
    t = _coerce_param(t)
    if i == 0:
        return Fraction(1) if _is_number(t) else t * 0 + 1
    total: Any = Fraction(0)
    for lam in integer_partitions(i):
        ap = partition_product(alpha, lam)
        if ap == 0:
            continue
        total = total + falling(t, lam.length) * (lam.d * ap)
    return total


def dot_scalar_moments(alpha: Sequence[Any], t: Any, order: int) -> Any:
    """All moments of ``t·α`` up to ``order``; a MomentSeq when ``t`` is rational."""
    vals = [dot_scalar(alpha, t, i) for i in range(order + 1)]
    if all(_is_number(v) for v in vals):
        return MomentSeq(tuple(vals))
    return tuple(vals)


def inverse_dot(alpha: Sequence[Any], t: Any, i: int) -> Any:
    """Moments of ``-t·α``, the inverse of ``t·α`` under binomial convolution."""
    return dot_scalar(alpha, -_coerce_param(t), i)


def binomial_convolution(a: Sequence[Any], b: Sequence[Any], order: int | None = None) -> Any:
    """Moments of the sum of two uncorrelated umbrae: ``Σ_j C(i,j) a_j b_{i-j}``."""
    n = min(len(a), len(b)) - 1 if order is None else order
    _need(a, n)
    _need(b, n)
    vals = []
    for i in range(n + 1):
        acc: Any = Fraction(0)
        for j in range(i + 1):
            acc = acc + math.comb(i, j) * a[j] * b[i - j]
        vals.append(acc)
    if all(_is_number(v) for v in vals):
        return MomentSeq(tuple(vals))
    return tuple(vals)


def factorial_moments(alpha: Sequence[Any]) -> tuple[Fraction, ...]:
    """``a_(i) = E[(α)_i] = Σ_k s(i,k) a_k`` for ``i = 0..N``."""
    n = len(alpha) - 1
    return tuple(
        sum((stirling1(i, k) * as_rational(alpha[k]) for k in range(i + 1)), Fraction(0)) for i in range(n + 1)
    )


def raw_from_factorial(fact: Sequence[Any]) -> MomentSeq:
    """Inverse of :func:`factorial_moments`: ``a_i = Σ_k S(i,k) a_(k)``."""
    n = len(fact) - 1
    return MomentSeq(
        tuple(sum((stirling2(i, k) * as_rational(fact[k]) for k in range(i + 1)), Fraction(0)) for i in range(n + 1))
    )


def dot_umbra(gamma: Sequence[Any], alpha: Sequence[Any], order: int) -> MomentSeq:
    """Moments of ``γ·α``: ``Σ_{λ⊢i} E[(γ)_{ν_λ}] d_λ a_λ``."""
    _need(gamma, order)
    _need(alpha, order)
    gf = factorial_moments(gamma[: order + 1])
    out = [Fraction(1)]
    for i in range(1, order + 1):
        out.append(sum((gf[lam.length] * lam.d * partition_product(alpha, lam) for lam in integer_partitions(i)), Fraction(0)))
    return MomentSeq(tuple(out))


def composition_umbra(gamma: Sequence[Any], alpha: Sequence[Any], order: int) -> Any:
    """Moments of ``γ·β·α``: ``Σ_{λ⊢i} d_λ g_{ν_λ} a_λ``.

    The generating function is ``f(γ, f(α,z) - 1)``.
    """
    _need(gamma, order)
    _need(alpha, order)
    out: list[Any] = [Fraction(1)]
    for i in range(1, order + 1):
        acc: Any = Fraction(0)
        for lam in integer_partitions(i):
            acc = acc + gamma[lam.length] * lam.d * partition_product(alpha, lam)
        out.append(acc)
    if all(_is_number(v) for v in out):
        return MomentSeq(tuple(out))
    return tuple(out)


def compositional_inverse(alpha: Sequence[Any], order: int) -> MomentSeq:
    """Moments of ``α^{<-1>}``, solving ``f(α^{<-1>}, f(α,z) - 1) = 1 + z`` order by order."""
    _need(alpha, order)
    a = [as_rational(v) for v in alpha[: order + 1]]
    if order >= 1 and a[1] == 0:
        raise ValidationError("compositional inverse needs a nonzero first moment")
    inv = [Fraction(1)] + [Fraction(0)] * order
    for i in range(1, order + 1):
        rest = Fraction(0)
        for lam in integer_partitions(i):
            if lam.length == i:
                continue  # the all-ones partition carries the unknown inv_i
            rest += lam.d * inv[lam.length] * partition_product(a, lam)
        target = Fraction(1) if i == 1 else Fraction(0)
        inv[i] = (target - rest) / a[1] ** i
    return MomentSeq(tuple(inv))


def disjoint_sum(alpha: Sequence[Any], gamma: Sequence[Any]) -> MomentSeq:
    """Moments ``a_i + g_i`` for ``i >= 1``, with ``a_0 = 1``."""
    if len(alpha) != len(gamma):
        raise ValidationError(f"order mismatch: {len(alpha) - 1} vs {len(gamma) - 1}")
    return MomentSeq((Fraction(1),) + tuple(as_rational(x) + as_rational(y) for x, y in zip(alpha[1:], gamma[1:])))


def scale(alpha: Sequence[Any], c: Any) -> Any:
    """Moments of ``c α``: ``a_i c^i``."""
    c = _coerce_param(c)
    vals = [Fraction(1)] + [alpha[i] * c**i for i in range(1, len(alpha))]
    if all(_is_number(v) for v in vals):
        return MomentSeq(tuple(vals))
    return tuple(vals)


def derivative_umbra(gamma: Sequence[Any]) -> MomentSeq:
    """``γ_D`` with moments ``i g_{i-1}``; one order higher than ``γ``."""
    return MomentSeq((Fraction(1),) + tuple(i * as_rational(gamma[i - 1]) for i in range(1, len(gamma) + 1)))


def primitive_umbra(gamma: Sequence[Any]) -> MomentSeq:
    """``γ_P`` with moments ``g_{i+1}/(i+1)``; one order lower than ``γ``."""
    return MomentSeq(tuple(as_rational(gamma[i + 1]) / (i + 1) for i in range(len(gamma) - 1)))


def levy_moments(c0: Any, s: Any, nu: Sequence[Any], t: Any, order: int) -> Any:
    """Moments of ``t·β·κ`` with ``κ = c0 χ +̇ s η +̇ ν``.

    ``nu`` is the moment sequence of the compensated jump part, so ``ν_1 = 0``.
    The cumulants of the process are ``t κ_i``; the moments follow from the
    complete Bell sum ``Σ_{λ⊢i} t^{ν_λ} d_λ κ_λ``.
    """
    _need(nu, order)
    if order >= 1 and nu[1] != 0:
        raise ValidationError("the jump part must have zero first moment")
    c0 = as_rational(c0)
    s = as_rational(s)
    t = _coerce_param(t)
    kappa: list[Any] = [Fraction(1)] + [as_rational(nu[i]) for i in range(1, order + 1)]
    if order >= 1:
        kappa[1] += c0
    if order >= 2:
        kappa[2] += s * s
    out: list[Any] = [Fraction(1)]
    for i in range(1, order + 1):
        acc: Any = Fraction(0)
        for lam in integer_partitions(i):
            kp = partition_product(kappa, lam)
            if kp:
                acc = acc + t**lam.length * (lam.d * kp)
        out.append(acc)
    if all(_is_number(v) for v in out):
        return MomentSeq(tuple(out))
    return tuple(out)


def multivariate_partition_weight(i: Sequence[int]) -> list[tuple[Any, int]]:
    """``[(Λ, i!/(m(Λ)! Λ!))]`` for every multi-index partition of ``i``; shared by multivar."""
    return [(lam, lam.weight) for lam in multi_index_partitions(i)]
