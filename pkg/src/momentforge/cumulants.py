"""Moments to cumulants and back, for classical, Boolean, free and Abel-type cumulants.

All six directions go through one expansion,

    abel_expansion(g, ρ, i) = Σ_{λ⊢i} E[(ρ)_{ν_λ - 1}] d_λ g_λ,

with a kind-specific choice of the factorial moments of ``ρ`` and of the input
scaling (raw moments ``a_i`` or ``ā_i = i! a_i``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from .combinat import integer_partitions
from .kernel import ValidationError, as_rational, falling, format_rational
from .umbral import MomentSeq, partition_product

__all__ = [
    "CumulantKind",
    "CumulantSeq",
    "abel_expansion",
    "moments_to_cumulants",
    "cumulants_to_moments",
    "abel_type_matrix",
]


@dataclass(frozen=True)
class CumulantKind:
    """``classical``, ``boolean``, ``free`` or ``abel`` with parameter ``m``."""

    tag: str
    m: int | None = None

    def __post_init__(self) -> None:
        if self.tag not in ("classical", "boolean", "free", "abel"):
            raise ValidationError(f"unsupported cumulant kind {self.tag!r}")
        if self.tag == "abel":
            if self.m is None or int(self.m) != self.m or self.m < 1:
                raise ValidationError("abel cumulants need a positive integer m")
        elif self.m is not None:
            raise ValidationError(f"{self.tag} cumulants take no parameter")

    @classmethod
    def parse(cls, value: "str | CumulantKind", m: int | None = None) -> "CumulantKind":
        """Accepts ``"free"``, ``"abel:3"``, ``"abel(3)"`` or ``("abel", m=3)``."""
        if isinstance(value, CumulantKind):
            return value
        text = value.strip().lower()
        for sep in (":", "("):
            if sep in text:
                head, _, rest = text.partition(sep)
                return cls(head, int(rest.rstrip(")")))
        return cls(text, m if text == "abel" else None)

    def __str__(self) -> str:
        return f"abel({self.m})" if self.tag == "abel" else self.tag


@dataclass(frozen=True)
class CumulantSeq:
    """Cumulants ``c_1..c_N`` of a given kind (``values[0]`` is ``c_1``)."""

    values: tuple[Fraction, ...]
    kind: CumulantKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", CumulantKind.parse(self.kind))

    @property
    def order(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        """1-based access: ``c[i]`` is ``c_i``."""
        if not 1 <= i <= len(self.values):
            raise IndexError(i)
        return self.values[i - 1]

    def to_json(self) -> list[str]:
        return [format_rational(v) for v in self.values]


def abel_expansion(g: Sequence[Any], rho_factorials: Sequence[Any], i: int) -> Any:
    """``Σ_{λ⊢i} E[(ρ)_{ν_λ-1}] d_λ g_λ``; ``g`` is indexed from 0, ``rho_factorials[0] = 1``."""
    if i < 1:
        raise ValidationError("abel_expansion needs i >= 1")
    if len(rho_factorials) < i:
        raise ValidationError(f"need {i} factorial moments of rho, got {len(rho_factorials)}")
    if len(g) <= i:
        raise ValidationError(f"need moments up to order {i}")
    total: Any = Fraction(0)
    for lam in integer_partitions(i):
        gp = partition_product(g, lam)
        if gp:
            total = total + rho_factorials[lam.length - 1] * lam.d * gp
    return total


def _barred(a: Sequence[Any]) -> list[Fraction]:
    return [as_rational(a[i]) * math.factorial(i) for i in range(len(a))]


# ρ factorial moments, as functions of (j, i) returning E[(ρ)_j] at order i
_FORWARD: dict[str, Callable[[int, int], Fraction]] = {
    "classical": lambda j, i: Fraction((-1) ** j * math.factorial(j)),
    "boolean": lambda j, i: Fraction((-1) ** j * math.factorial(j + 1)),
    "free": lambda j, i: Fraction(falling(-i, j)),
}
_BACKWARD: dict[str, Callable[[int, int], Fraction]] = {
    "classical": lambda j, i: Fraction(1),
    "boolean": lambda j, i: Fraction(math.factorial(j + 1)),
    "free": lambda j, i: Fraction(falling(i, j)),
}


def moments_to_cumulants(a: MomentSeq | Sequence[Any], kind: str | CumulantKind = "classical") -> CumulantSeq:
    """Cumulants ``c_1..c_N`` of the moment sequence ``a`` (with ``a_0 = 1``).

    Boolean and free cumulants are reported normalized (``b_i``, ``r_i``); the
    unnormalized ``i!``-scaled values are available from :func:`abel_type_matrix`.
    """
    kind = CumulantKind.parse(kind)
    a = a if isinstance(a, MomentSeq) else MomentSeq(tuple(a))
    n = a.order
    out: list[Fraction] = []
    if kind.tag == "abel":
        m = kind.m
        rho = [Fraction(falling(-m, j)) for j in range(n)]
        return CumulantSeq(tuple(abel_expansion(a, rho, i) for i in range(1, n + 1)), kind)
    scaled = kind.tag in ("boolean", "free")
    g = _barred(a) if scaled else list(a)
    fn = _FORWARD[kind.tag]
    for i in range(1, n + 1):
        rho = [fn(j, i) for j in range(i)]
        v = abel_expansion(g, rho, i)
        out.append(v / math.factorial(i) if scaled else v)
    return CumulantSeq(tuple(out), kind)


def cumulants_to_moments(c: CumulantSeq | Sequence[Any], kind: str | CumulantKind | None = None) -> MomentSeq:
    """Inverse of :func:`moments_to_cumulants` for the same kind."""
    if isinstance(c, CumulantSeq):
        if kind is not None and CumulantKind.parse(kind) != c.kind:
            raise ValidationError("kind argument disagrees with the cumulant sequence")
        kind, vals = c.kind, list(c.values)
    else:
        kind, vals = CumulantKind.parse(kind or "classical"), [as_rational(v) for v in c]
    n = len(vals)
    if kind.tag == "abel":
        return _abel_inverse(vals, kind.m)
    scaled = kind.tag in ("boolean", "free")
    g = [Fraction(1)] + [v * math.factorial(i) if scaled else v for i, v in enumerate(vals, start=1)]
    fn = _BACKWARD[kind.tag]
    out = [Fraction(1)]
    for i in range(1, n + 1):
        rho = [fn(j, i) for j in range(i)]
        v = abel_expansion(g, rho, i)
        out.append(v / math.factorial(i) if scaled else v)
    return MomentSeq(tuple(out))


def _abel_inverse(c: list[Fraction], m: int) -> MomentSeq:
    # c_i = a_i + Σ_{λ⊢i, λ≠(i)} (-m)_{ν-1} d_λ a_λ, so solve for a_i in increasing order
    a = [Fraction(1)]
    for i in range(1, len(c) + 1):
        rest = Fraction(0)
        for lam in integer_partitions(i):
            if lam.length == 1:
                continue
            rest += falling(-m, lam.length - 1) * lam.d * partition_product(a, lam)
        a.append(c[i - 1] - rest)
    return MomentSeq(tuple(a))


def abel_type_matrix(a: MomentSeq | Sequence[Any], max_m: int, order: int, *, scaled: bool = False) -> list[list[Fraction]]:
    """Matrix ``C[i-1][m-1] = c_{i,m}`` of Abel-type cumulants, ``1 <= i <= order``, ``1 <= m <= max_m``.

    With ``scaled=True`` the expansion is applied to ``ā_i = i! a_i``; then
    column 2 holds the unnormalized Boolean cumulants and the diagonal the
    unnormalized free cumulants.
    """
    a = a if isinstance(a, MomentSeq) else MomentSeq(tuple(a))
    if order > a.order:
        raise ValidationError(f"order {order} exceeds available moments {a.order}")
    if max_m < 1:
        raise ValidationError("max_m must be >= 1")
    g = _barred(a) if scaled else list(a)
    rows = []
    for i in range(1, order + 1):
        row = []
        for m in range(1, max_m + 1):
            rho = [Fraction(falling(-m, j)) for j in range(i)]
            row.append(abel_expansion(g, rho, i))
        rows.append(row)
    return rows
