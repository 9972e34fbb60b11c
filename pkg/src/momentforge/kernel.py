"""Exact scalars, truncated exponential series and sparse polynomials.

Everything downstream is built from three value types:

* ``Fraction`` for exact rational scalars,
* :class:`TruncatedSeries` for exponential generating functions truncated at
  a fixed order (coefficient ``i`` stores the ``i``-th moment, not ``a_i/i!``),
* :class:`Poly` for sparse polynomials in named symbols, whose coefficients
  are either ``Fraction`` or :class:`RationalFunctionInN`.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence, Union

from sympy.polys.domains import QQ
from sympy.polys.fields import field

__all__ = [
    "MomentforgeError",
    "ValidationError",
    "CapExceeded",
    "cap",
    "as_rational",
    "format_rational",
    "falling",
    "rising",
    "TruncatedSeries",
    "series_compose",
    "series_reciprocal",
    "series_multiply",
    "series_power",
    "RationalFunctionInN",
    "Poly",
]


class MomentforgeError(ValueError):
    """Base class for every error raised by the library."""


class ValidationError(MomentforgeError):
    """Input violates a documented precondition."""


class CapExceeded(MomentforgeError):
    """An enumeration or expansion would exceed its configured size cap."""


CAP_ENV = "MOMENTFORGE_CAP"


def cap(default: int) -> int:
    """Return the enumeration cap, honouring the ``MOMENTFORGE_CAP`` override."""
    raw = os.environ.get(CAP_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValidationError(f"{CAP_ENV} must be an integer, got {raw!r}") from exc


def check_cap(value: int, default: int, what: str) -> None:
    limit = cap(default)
    if value > limit:
        raise CapExceeded(f"{what} = {value} exceeds cap {limit}")


# --------------------------------------------------------------------------
# scalars

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def as_rational(value: Any) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``.

    Floats are rejected on purpose: every computation in the package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise ValidationError(f"not a rational literal: {value!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValidationError(f"zero denominator in {value!r}")
        return Fraction(int(m.group(1)), den)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise ValidationError(f"cannot interpret {value!r} as an exact rational")


def format_rational(r: Fraction | int) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def falling(x: Any, k: int) -> Any:
    """Falling factorial ``(x)_k = x (x-1) ... (x-k+1)``; works for Poly too."""
    out: Any = 1
    for j in range(k):
        out = out * (x - j)
    return out


def rising(x: Any, k: int) -> Any:
    out: Any = 1
    for j in range(k):
        out = out * (x + j)
    return out


# --------------------------------------------------------------------------
# truncated exponential series


@dataclass(frozen=True)
class TruncatedSeries:
    """Exponential generating function ``sum_i c_i z^i / i!`` truncated at ``order``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValidationError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    @classmethod
    def exp(cls, order: int) -> "TruncatedSeries":
        return cls(tuple(Fraction(1) for _ in range(order + 1)))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((Fraction(1),) + (Fraction(0),) * order)

    @classmethod
    def identity(cls, order: int) -> "TruncatedSeries":
        """The series ``1 + z``: neutral element for :func:`series_compose`."""
        coeffs = [Fraction(0)] * (order + 1)
        coeffs[0] = Fraction(1)
        if order >= 1:
            coeffs[1] = Fraction(1)
        return cls(tuple(coeffs))

    def ordinary(self) -> list[Fraction]:
        return [c / math.factorial(i) for i, c in enumerate(self.coeffs)]

    @classmethod
    def from_ordinary(cls, coeffs: Sequence[Fraction]) -> "TruncatedSeries":
        return cls(tuple(Fraction(c) * math.factorial(i) for i, c in enumerate(coeffs)))


def _mul_ordinary(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def series_multiply(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Product of generating functions (binomial convolution of the coefficients)."""
    if f.order != g.order:
        raise ValidationError("series orders differ")
    return TruncatedSeries.from_ordinary(_mul_ordinary(f.ordinary(), g.ordinary(), f.order))


def series_power(f: TruncatedSeries, k: int) -> TruncatedSeries:
    out = TruncatedSeries.one(f.order).ordinary()
    base = f.ordinary()
    for _ in range(k):
        out = _mul_ordinary(out, base, f.order)
    return TruncatedSeries.from_ordinary(out)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of ``outer(inner(z) - 1)``, both in the exponential convention."""
    if outer.order != inner.order:
        raise ValidationError(f"order mismatch: {outer.order} vs {inner.order}")
    if inner[0] != 1:
        raise ValidationError("inner series must have constant term 1")
    n = outer.order
    shifted = inner.ordinary()
    shifted[0] = Fraction(0)
    oc = outer.ordinary()
    # Horner in the shifted inner series
    acc = [Fraction(0)] * (n + 1)
    for c in reversed(oc):
        acc = _mul_ordinary(acc, shifted, n)
        acc[0] += c
    return TruncatedSeries.from_ordinary(acc)


def series_reciprocal(f: TruncatedSeries) -> TruncatedSeries:
    """The series ``g`` with ``f g = 1`` up to the truncation order."""
    if f[0] != 1:
        raise ValidationError("reciprocal needs constant term 1")
    a = f.ordinary()
    g = [Fraction(0)] * (f.order + 1)
    g[0] = Fraction(1)
    for i in range(1, f.order + 1):
        g[i] = -sum((a[j] * g[i - j] for j in range(1, i + 1)), Fraction(0))
    return TruncatedSeries.from_ordinary(g)


# --------------------------------------------------------------------------
# rational functions of the sample size n

_FIELD, _N = field("n", QQ)


def _to_qq(c: Fraction | int) -> Any:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _from_qq(c: Any) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _poly_text(coeffs: Sequence[Fraction], var: str = "n") -> str:
    """Render low-to-high coefficients as ``n^2 - 3/2*n + 1``."""
    parts: list[str] = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if deg == 0:
            body = format_rational(mag)
        else:
            mono = var if deg == 1 else f"{var}^{deg}"
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


class RationalFunctionInN:
    """Reduced quotient of polynomials in the symbol ``n`` with rational coefficients.

    Arithmetic and gcd normalisation are delegated to sympy's sparse fraction
    field; this class fixes the canonical presentation (monic denominator).
    """

    __slots__ = ("_f",)

    def __init__(self, value: Any = 0) -> None:
        if isinstance(value, RationalFunctionInN):
            self._f = value._f
        elif isinstance(value, (int, Fraction)):
            self._f = _FIELD(_to_qq(value))
        else:
            self._f = value  # already a field element

    @classmethod
    def n(cls) -> "RationalFunctionInN":
        return cls(_N)

    @classmethod
    def falling_n(cls, k: int) -> "RationalFunctionInN":
        out = _FIELD(1)
        for j in range(k):
            out *= _N - j
        return cls(out)

    @classmethod
    def from_coefficients(cls, numer: Sequence[Fraction], denom: Sequence[Fraction]) -> "RationalFunctionInN":
        """Build from low-to-high coefficient lists of numerator and denominator."""
        ring = _FIELD.ring
        num = ring.from_dict({(i,): _to_qq(c) for i, c in enumerate(numer) if c})
        den = ring.from_dict({(i,): _to_qq(c) for i, c in enumerate(denom) if c})
        if not den:
            raise ZeroDivisionError("zero denominator")
        return cls(_FIELD.new(num, den))

    @staticmethod
    def _lift(other: Any) -> Any:
        if isinstance(other, RationalFunctionInN):
            return other._f
        if isinstance(other, (int, Fraction)):
            return _FIELD(_to_qq(other))
        return NotImplemented

    def __add__(self, other: Any) -> Any:
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RationalFunctionInN(self._f + o)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Any:
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RationalFunctionInN(self._f - o)

    def __rsub__(self, other: Any) -> Any:
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RationalFunctionInN(o - self._f)

    def __mul__(self, other: Any) -> Any:
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RationalFunctionInN(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Any:
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RationalFunctionInN(self._f / o)

    def __rtruediv__(self, other: Any) -> Any:
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else RationalFunctionInN(o / self._f)

    def __neg__(self) -> "RationalFunctionInN":
        return RationalFunctionInN(-self._f)

    def __pow__(self, k: int) -> "RationalFunctionInN":
        return RationalFunctionInN(self._f**k)

    def __eq__(self, other: Any) -> bool:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return not (self._f - o).numer

    def __ne__(self, other: Any) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        return hash(self.parts())

    def parts(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Canonical (numerator, denominator) coefficients, low to high, denominator monic."""

        def coeffs(p: Any) -> list[Fraction]:
            terms = dict(p.terms())
            deg = max((e[0] for e in terms), default=0)
            return [_from_qq(terms[(d,)]) if (d,) in terms else Fraction(0) for d in range(deg + 1)]

        num, den = coeffs(self._f.numer), coeffs(self._f.denom)
        lead = den[-1]
        return tuple(c / lead for c in num), tuple(c / lead for c in den)

    def is_constant(self) -> bool:
        num, den = self.parts()
        return len(den) == 1 and len(num) == 1

    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValidationError(f"{self} depends on n")
        return self.parts()[0][0]

    def evaluate(self, n: int | Fraction) -> Fraction:
        num, den = self.parts()
        value = Fraction(n)
        d = sum((c * value**i for i, c in enumerate(den)), Fraction(0))
        if d == 0:
            raise ZeroDivisionError(f"pole at n = {n}")
        return sum((c * value**i for i, c in enumerate(num)), Fraction(0)) / d

    def __str__(self) -> str:
        num, den = self.parts()
        ntext = _poly_text(num)
        if len(den) == 1:
            return ntext
        if sum(1 for c in num if c) > 1:
            ntext = f"({ntext})"
        dtext = _poly_text(den)
        if sum(1 for c in den if c) > 1:
            dtext = f"({dtext})"
        return f"{ntext}/{dtext}"

    def __repr__(self) -> str:
        return f"RationalFunctionInN({self})"


# --------------------------------------------------------------------------
# sparse polynomials over named symbols

Monomial = tuple[tuple[str, int], ...]
Coefficient = Union[Fraction, RationalFunctionInN]

_SYM_RE = re.compile(r"^([^\d]*)(\d*)(.*)$")


@lru_cache(maxsize=None)
def symbol_key(name: str) -> tuple[Any, ...]:
    """Natural sort key so that ``S2`` sorts before ``S10``."""
    m = _SYM_RE.match(name)
    assert m is not None
    prefix, digits, rest = m.groups()
    return (prefix, int(digits) if digits else -1, rest)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items(), key=lambda kv: symbol_key(kv[0])))


def monomial_text(mono: Monomial) -> str:
    """``(("S1", 2), ("S2", 1))`` -> ``"S1^2*S2"``; the empty monomial is ``"1"``."""
    if not mono:
        return "1"
    return "*".join(s if e == 1 else f"{s}^{e}" for s, e in mono)


def parse_monomial(text: str) -> Monomial:
    if text.strip() == "1":
        return ()
    d: dict[str, int] = {}
    for factor in text.split("*"):
        name, _, exp = factor.strip().partition("^")
        d[name] = d.get(name, 0) + (int(exp) if exp else 1)
    return tuple(sorted(d.items(), key=lambda kv: symbol_key(kv[0])))


def _order_key(mono: Monomial) -> tuple[Any, ...]:
    return (-sum(e for _, e in mono), tuple((symbol_key(s), -e) for s, e in mono))


class Poly:
    """Sparse polynomial ``{monomial: coefficient}`` with exact coefficients.

    Instances are treated as immutable. Symbols are plain strings; monomials are
    tuples of ``(symbol, exponent)`` sorted in natural symbol order.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Any] | None = None) -> None:
        self._terms: dict[Monomial, Any] = {}
        if terms:
            for mono, c in terms.items():
                if c != 0:
                    self._terms[mono] = c

    # constructors
    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, c: Any) -> "Poly":
        if isinstance(c, Poly):
            return c
        return cls({(): c if isinstance(c, RationalFunctionInN) else as_rational(c)})

    @classmethod
    def from_json(cls, payload: Mapping[str, str]) -> "Poly":
        return cls({parse_monomial(k): as_rational(v) for k, v in payload.items()})

    # inspection
    @property
    def terms(self) -> dict[Monomial, Any]:
        return dict(self._terms)

    def items(self) -> list[tuple[Monomial, Any]]:
        return sorted(self._terms.items(), key=lambda kv: _order_key(kv[0]))

    def __iter__(self) -> Iterator[tuple[Monomial, Any]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def symbols(self) -> set[str]:
        return {s for mono in self._terms for s, _ in mono}

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(name, 0) for m in self._terms)

    def coeff(self, mono: Monomial | str | Mapping[str, int] = ()) -> Any:
        if isinstance(mono, str):
            mono = parse_monomial(mono)
        elif isinstance(mono, Mapping):
            mono = tuple(sorted(((s, e) for s, e in mono.items() if e), key=lambda kv: symbol_key(kv[0])))
        return self._terms.get(mono, Fraction(0))

    def constant_value(self) -> Any:
        if any(m for m in self._terms):
            raise ValidationError(f"polynomial {self} is not constant")
        return self._terms.get((), Fraction(0))

    # arithmetic
    @staticmethod
    def _coerce(other: Any) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, RationalFunctionInN)):
            return Poly({(): other})
        return None

    def __add__(self, other: Any) -> Any:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> Any:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> Any:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> Any:
        if isinstance(other, (int, Fraction, RationalFunctionInN)):
            if other == 0:
                return Poly()
            return Poly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict[Monomial, Any] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                p = c1 * c2
                out[m] = out[m] + p if m in out else p
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
        if isinstance(other, (Fraction, RationalFunctionInN)):
            return Poly({m: c / other for m, c in self._terms.items()})
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValidationError("negative powers of polynomials are not supported")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __ne__(self, other: Any) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None  # type: ignore[assignment]

    # transformations
    def map_coeffs(self, fn: Callable[[Any], Any]) -> "Poly":
        return Poly({m: fn(c) for m, c in self._terms.items()})

    def subs(self, values: Mapping[str, Any]) -> "Poly":
        """Substitute scalars or polynomials for symbols."""
        out = Poly()
        cache: dict[tuple[str, int], Any] = {}
        for mono, c in self._terms.items():
            rest: list[tuple[str, int]] = []
            term: Any = Poly.const(c) if not isinstance(c, Poly) else c
            for s, e in mono:
                if s in values:
                    key = (s, e)
                    if key not in cache:
                        v = values[s]
                        cache[key] = (v if isinstance(v, Poly) else Poly.const(v)) ** e
                    term = term * cache[key]
                else:
                    rest.append((s, e))
            out = out + term * Poly({tuple(rest): Fraction(1)})
        return out

    def lower(self, names: Sequence[str], moment: Callable[[tuple[int, ...]], Any]) -> "Poly":
        """Umbral evaluation: replace ``prod name_j^{e_j}`` by ``moment((e_1, ..., e_k))``."""
        out = Poly()
        idx = {s: j for j, s in enumerate(names)}
        cache: dict[tuple[int, ...], Any] = {}
        for mono, c in self._terms.items():
            exps = [0] * len(names)
            rest: list[tuple[str, int]] = []
            for s, e in mono:
                if s in idx:
                    exps[idx[s]] = e
                else:
                    rest.append((s, e))
            key = tuple(exps)
            if key not in cache:
                v = moment(key)
                cache[key] = v if isinstance(v, Poly) else Poly.const(v)
            out = out + cache[key] * Poly({tuple(rest): c})
        return out

    def evaluate(self, values: Mapping[str, Any]) -> Any:
        """Full substitution; returns a scalar."""
        return self.subs(values).constant_value()

    # presentation
    def to_json(self) -> dict[str, str]:
        return {monomial_text(m): _coef_text(c) for m, c in self.items()}

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for mono, c in self.items():
            ctext = _coef_text(c)
            if not mono:
                pieces.append(ctext)
                continue
            mtext = monomial_text(mono)
            if ctext == "1":
                pieces.append(mtext)
            elif ctext == "-1":
                pieces.append("-" + mtext)
            else:
                if (" + " in ctext or " - " in ctext) and not ctext.startswith("("):
                    ctext = f"({ctext})"
                pieces.append(f"{ctext}*{mtext}")
        text = pieces[0]
        for p in pieces[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self) -> str:
        return f"Poly({self})"


def _coef_text(c: Any) -> str:
    if isinstance(c, Fraction):
        return format_rational(c)
    return str(c)


def poly_sum(items: Iterable[Any]) -> Poly:
    out = Poly()
    for it in items:
        out = out + it
    return out
