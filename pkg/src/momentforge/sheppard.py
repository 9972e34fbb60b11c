"""Sheppard's corrections for grouped moments as exact linear maps.

Raw moments are recovered from grouped ones by adding an independent shift
umbra: ``h(ι + 1/2)`` in the continuous case and
``h(ι + 1/2) + (h/m)(-1·ι - 1/2)`` for a discrete population grouped ``m``
values at a time. The width ``h`` (and ``m``) may be rationals or symbols;
names given as strings become sympy symbols.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from sympy import Symbol

from .combinat import bernoulli
from .kernel import ValidationError, as_rational
from .umbral import MomentSeq, MultiMomentTable

__all__ = [
    "SheppardConfig",
    "shift_moments",
    "sheppard_correct",
    "sheppard_discrete",
    "sheppard_group",
    "sheppard_multivariate",
]


def _param(x: Any) -> Any:
    if isinstance(x, str):
        try:
            return as_rational(x)
        except ValidationError:
            return Symbol(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return x


def _finish(vals: list[Any]) -> Any:
    if all(isinstance(v, (int, Fraction)) for v in vals):
        return MomentSeq(tuple(vals))
    return tuple(vals)


def _bernoulli_half(k: int) -> Fraction:
    """``E[(ι + 1/2)^k] = (2^{1-k} - 1) B_k``."""
    return (Fraction(2) ** (1 - k) - 1) * bernoulli(k)


def _centered_uniform(k: int) -> Fraction:
    """``E[(-1·ι - 1/2)^k]``: moments of a uniform variable on ``[-1/2, 1/2]``."""
    return sum((math.comb(k, j) * Fraction(1, j + 1) * Fraction(-1, 2) ** (k - j) for j in range(k + 1)), Fraction(0))


def shift_moments(h: Any, order: int, m: Any = None) -> list[Any]:
    """Moments of the shift umbra added to the grouped variable, ``0..order``."""
    h = _param(h)
    cont = [_bernoulli_half(k) * h**k for k in range(order + 1)]
    if m is None:
        return cont
    m = _param(m)
    if isinstance(m, Fraction) and (m < 1 or m.denominator != 1):
        raise ValidationError("m must be a positive integer")
    g = h / m
    disc = [_centered_uniform(k) * g**k for k in range(order + 1)]
    out = []
    for i in range(order + 1):
        acc: Any = Fraction(0)
        for j in range(i + 1):
            acc = acc + math.comb(i, j) * cont[j] * disc[i - j]
        out.append(acc)
    return out


def _apply_shift(grouped: Sequence[Any], shift: Sequence[Any], order: int) -> Any:
    if order > len(grouped) - 1:
        raise ValidationError(f"order {order} exceeds the grouped moments available")
    vals = []
    for i in range(order + 1):
        acc: Any = Fraction(0)
        for j in range(i + 1):
            acc = acc + math.comb(i, j) * shift[j] * _param(grouped[i - j])
        vals.append(acc)
    return _finish(vals)


def sheppard_correct(grouped: Sequence[Any], h: Any, order: int | None = None) -> Any:
    """``a_i = Σ_j C(i,j)(2^{1-j} - 1) B_j h^j ã_{i-j}``."""
    order = len(grouped) - 1 if order is None else order
    return _apply_shift(grouped, shift_moments(h, order), order)


def sheppard_discrete(grouped: Sequence[Any], h: Any, m: Any, order: int | None = None) -> Any:
    """Correction for a discrete population grouped ``m`` consecutive values per class."""
    order = len(grouped) - 1 if order is None else order
    return _apply_shift(grouped, shift_moments(h, order, m), order)


def sheppard_group(true: Sequence[Any], h: Any, order: int | None = None, m: Any = None) -> Any:
    """Inverse map: grouped moments ``ã`` from raw moments ``a``.

    Solves ``a_i = Σ_j C(i,j) s_j ã_{i-j}`` for ``ã_i``; the system is
    triangular with unit diagonal because ``s_0 = 1``.
    """
    order = len(true) - 1 if order is None else order
    if order > len(true) - 1:
        raise ValidationError(f"order {order} exceeds the moments available")
    s = shift_moments(h, order, m)
    out: list[Any] = []
    for i in range(order + 1):
        acc: Any = _param(true[i])
        for j in range(1, i + 1):
            acc = acc - math.comb(i, j) * s[j] * out[i - j]
        out.append(acc)
    return _finish(out)


@dataclass(frozen=True)
class SheppardConfig:
    """Class widths ``h_j`` per coordinate and optional discrete group counts ``m_j``."""

    widths: tuple[Any, ...]
    groups: tuple[Any, ...] | None = None

    def __post_init__(self) -> None:
        widths = tuple(_param(h) for h in self.widths)
        if not widths:
            raise ValidationError("at least one width is required")
        object.__setattr__(self, "widths", widths)
        if self.groups is not None:
            groups = tuple(None if g is None else _param(g) for g in self.groups)
            if len(groups) != len(widths):
                raise ValidationError("groups must match widths in length")
            for g in groups:
                if isinstance(g, Fraction) and (g < 1 or g.denominator != 1):
                    raise ValidationError("group counts must be positive integers")
            object.__setattr__(self, "groups", groups)


def sheppard_multivariate(grouped: MultiMomentTable | Mapping[Sequence[int], Any], config: SheppardConfig, order: Sequence[int]) -> MultiMomentTable:
    """Corrected joint moments ``m_t`` for every ``t <= order`` componentwise.

    ``m_t = Σ_{s<=t} Π_j C(t_j,s_j) E[shift_j^{t_j-s_j}] m̃_s`` with one
    independent shift per coordinate.
    """
    table = grouped if isinstance(grouped, MultiMomentTable) else MultiMomentTable(grouped)
    k = table.dim
    order = tuple(int(x) for x in order)
    if len(order) != k or len(config.widths) != k:
        raise ValidationError("order, widths and table dimension must agree")
    groups = config.groups or (None,) * k
    shifts = [shift_moments(h, order[j], groups[j]) for j, h in enumerate(config.widths)]
    out: dict[tuple[int, ...], Any] = {}
    for t in itertools.product(*(range(o + 1) for o in order)):
        acc: Any = Fraction(0)
        for s in itertools.product(*(range(x + 1) for x in t)):
            w: Any = Fraction(1)
            for j in range(k):
                w = w * math.comb(t[j], s[j]) * shifts[j][t[j] - s[j]]
            if w != 0:
                acc = acc + w * table[s]
        out[t] = acc
    return MultiMomentTable(out, k)
