"""Polynomial families: time-space harmonic, Appell, Sheffer and Bell-type.

Polynomials are :class:`~momentforge.kernel.Poly` objects in the symbols ``x``
and ``t`` (or ``n`` for random-walk families) with exact rational coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .combinat import bernoulli, euler, integer_partitions, parking_functions, stirling1, stirling2
from .kernel import (
    Poly,
    TruncatedSeries,
    ValidationError,
    as_rational,
    series_multiply,
    series_reciprocal,
)
from .umbral import (
    MomentSeq,
    composition_umbra,
    compositional_inverse,
    dot_scalar,
    dot_umbra,
    named_umbra,
    partition_product,
    primitive_umbra,
    scale,
)

__all__ = [
    "tsh_polynomial",
    "process_moments",
    "process_expectation",
    "FamilySpec",
    "FAMILIES",
    "family",
    "family_base",
    "appell_bernoulli_euler",
    "exponential_polynomial",
    "bell_polynomials",
    "generalized_bell",
    "sheffer_polynomial",
    "riordan_array",
    "sheffer_coefficients",
    "connection_constants",
    "lagrange_inverse",
    "kailath_segall",
    "volume_polynomial",
]


def _symbol(x: Any) -> Any:
    if isinstance(x, str):
        try:
            return as_rational(x)
        except ValidationError:
            return Poly.var(x)
    if isinstance(x, int):
        return Fraction(x)
    return x


def _pow(x: Any, j: int) -> Any:
    return x**j if j else (Poly.const(1) if isinstance(x, Poly) else Fraction(1))


# --------------------------------------------------------------------------
# time-space harmonic polynomials


def process_moments(alpha: Sequence[Any], order: int, time: str = "t") -> list[Poly]:
    """Moments ``q_j(t) = E[(t·α)^j]`` as polynomials in ``time``, ``j = 0..order``."""
    return [Poly.const(dot_scalar(alpha, time, j)) for j in range(order + 1)]


def tsh_polynomial(alpha: Sequence[Any], i: int, *, time: str = "t", x: str = "x") -> Poly:
    """``Q_i(x,t) = E[(x - t·α)^i] = Σ_j C(i,j) x^j q_{i-j}(-t)``."""
    if i > len(alpha) - 1:
        raise ValidationError(f"order {i} exceeds the moments of alpha")
    minus_t = -Poly.var(time)
    X = Poly.var(x)
    out = Poly()
    for j in range(i + 1):
        out = out + X**j * dot_scalar(alpha, minus_t, i - j) * math.comb(i, j)
    return out


def process_expectation(poly: Poly, alpha: Sequence[Any], *, time: str = "t", x: str = "x") -> Poly:
    """Replace ``x^j`` by ``E[(t·α)^j]``; zero for every time-space harmonic polynomial."""
    deg = max(poly.degree(x), 0)
    q = process_moments(alpha, deg, time)
    return poly.lower([x], lambda e: q[e[0]])


# --------------------------------------------------------------------------
# named families


def _partial_bell_values(m: Sequence[Any], i: int, k: int) -> Any:
    """``B_{i,k}(m_1, ..., m_{i-k+1})``; ``m`` is indexed from 1."""
    return bell_polynomials("partial", m, i, k)


def _cumulant_seq(fn: Any, k: int) -> list[Fraction]:
    return [Fraction(fn(i)) for i in range(1, k + 1)]


@dataclass(frozen=True)
class FamilySpec:
    """A named family and its parameters.

    ``s`` (Hermite scale), ``lam`` (intensity / gamma scale), ``p`` (success
    probability), ``a`` (number of uniforms per step) and the moment sequences
    ``alpha`` and ``gamma`` for the Lévy-Sheffer system. Unset parameters take
    the family's default.
    """

    name: str
    s: Any = 1
    lam: Any = 1
    p: Any = None
    a: Any = 1
    alpha: Any = None
    gamma: Any = None

    def __post_init__(self) -> None:
        if self.name not in FAMILIES:
            raise ValidationError(f"unknown family {self.name!r}")
        for attr in ("s", "lam", "a"):
            object.__setattr__(self, attr, as_rational(getattr(self, attr)))
        if self.s <= 0:
            raise ValidationError("s must be positive")
        if self.lam <= 0:
            raise ValidationError("lam must be positive")
        if self.a < 1 or self.a.denominator != 1:
            raise ValidationError("a must be a positive integer")
        if self.p is not None:
            p = as_rational(self.p)
            if not 0 < p < 1:
                raise ValidationError("p must lie strictly between 0 and 1")
            object.__setattr__(self, "p", p)


_DEFAULT_P = {"meixner1": Fraction(1, 2), "krawtchouk": Fraction(1, 3)}


def _p(spec: FamilySpec) -> Fraction:
    return spec.p if spec.p is not None else _DEFAULT_P.get(spec.name, Fraction(1, 2))


def family_base(spec: FamilySpec, order: int) -> tuple[MomentSeq, str]:
    """Moments of the one-step umbra of the family's process and its time symbol."""
    name = spec.name
    if name == "hermite":
        return composition_umbra(named_umbra("unity", order), scale(named_umbra("eta", order), spec.s), order), "t"
    if name == "poisson_charlier":
        return MomentSeq(tuple(dot_scalar(named_umbra("bell", order), spec.lam, i) for i in range(order + 1))), "t"
    if name == "levy_sheffer":
        alpha = spec.alpha if spec.alpha is not None else named_umbra("unity", order)
        gamma = spec.gamma if spec.gamma is not None else named_umbra("unity", order)
        return composition_umbra(alpha, compositional_inverse(gamma, order), order), "t"
    if name == "laguerre":
        return named_umbra("boolean_unity", order), "t"
    if name == "actuarial":
        ub = named_umbra("boolean_unity", order)
        return MomentSeq(tuple(dot_scalar(ub, spec.lam, i) for i in range(order + 1))), "t"
    if name == "meixner1":
        p = _p(spec)
        d = p / (1 - p)
        poisson = MomentSeq(tuple(dot_scalar(named_umbra("bell", order), d, i) for i in range(order + 1)))
        # Pascal step ū·(d·β) with d = p/q
        return dot_umbra(named_umbra("boolean_unity", order), poisson, order), "t"
    if name == "bernoulli_tsh":
        return named_umbra("uniform", order), "n"
    if name == "euler_tsh":
        return MomentSeq((Fraction(1),) + (Fraction(1, 2),) * order), "n"
    if name == "krawtchouk":
        p = _p(spec)
        return MomentSeq((Fraction(1),) + (p,) * order), "n"
    if name == "pseudo_narumi":
        uni = named_umbra("uniform", order)
        return MomentSeq(tuple(dot_scalar(uni, spec.a, i) for i in range(order + 1))), "n"
    raise ValidationError(f"unknown family {name!r}")


def _family_weights(spec: FamilySpec, k: int) -> list[Any] | None:
    """Coefficients ``w_i`` with ``P_k = Σ_i w_i Q_i``; ``None`` means ``P_k = Q_k``."""
    name = spec.name
    if name in ("hermite", "laguerre", "bernoulli_tsh", "euler_tsh"):
        return None
    if name == "poisson_charlier":
        return [Fraction(stirling1(k, i)) for i in range(k + 1)]
    if name == "levy_sheffer":
        gamma = spec.gamma if spec.gamma is not None else named_umbra("unity", k)
        g = [gamma[j] for j in range(1, k + 1)]
        return [_partial_bell_values(g, k, i) for i in range(k + 1)]
    if name == "actuarial":
        m = _cumulant_seq(lambda i: (-1) ** i * math.factorial(i - 1), k)
    elif name == "meixner1":
        p = _p(spec)
        m = _cumulant_seq(lambda i: (-1) ** (i - 1) * math.factorial(i - 1) * (p ** (-i) - 1), k)
    elif name == "krawtchouk":
        p = _p(spec)
        d = p / (1 - p)
        m = _cumulant_seq(lambda i: -math.factorial(i - 1) / d**i + (-1) ** i * math.factorial(i - 1), k)
    elif name == "pseudo_narumi":
        m = _cumulant_seq(lambda i: (-1) ** (i - 1) * math.factorial(i - 1), k)
    else:
        raise ValidationError(f"unknown family {name!r}")
    return [_partial_bell_values(m, k, i) for i in range(k + 1)]


FAMILIES = (
    "hermite",
    "poisson_charlier",
    "levy_sheffer",
    "laguerre",
    "actuarial",
    "meixner1",
    "bernoulli_tsh",
    "euler_tsh",
    "krawtchouk",
    "pseudo_narumi",
)


def family(spec: FamilySpec | str, k: int) -> Poly:
    """Degree-``k`` member of a named time-space harmonic family.

    The value is the umbral right-hand side: ``Σ_i w_i E[(x - t·γ)^i]`` where
    ``γ`` is the family's one-step umbra (:func:`family_base`) and ``w_i`` are
    Stirling or partial Bell weights. Scalar prefactors of the classical
    normalization (``k!``, ``(-1)^k``, ``(t)_k`` ...) are not divided out, so the
    result stays polynomial in ``x`` and the time symbol.
    """
    if isinstance(spec, str):
        spec = FamilySpec(spec)
    if k < 0:
        raise ValidationError("k must be >= 0")
    order = max(k, 1)
    base, time = family_base(spec, order)
    weights = _family_weights(spec, k)
    if weights is None:
        return tsh_polynomial(base, k, time=time)
    out = Poly()
    for i, w in enumerate(weights):
        if w:
            out = out + tsh_polynomial(base, i, time=time) * w
    return out


# --------------------------------------------------------------------------
# Appell, exponential and Bell polynomials


def appell_bernoulli_euler(kind: str, i: int, x: str = "x") -> Poly:
    """Bernoulli ``E[(x + ι)^i]`` or Euler ``E[(x + (ξ - 1)/2)^i]`` polynomials."""
    if i < 0:
        raise ValidationError("i must be >= 0")
    X = Poly.var(x)
    if kind == "bernoulli":
        shift = [bernoulli(j) for j in range(i + 1)]
    elif kind == "euler":
        half = Fraction(1, 2)
        shift = [
            sum((math.comb(k, l) * euler(l) * half**l * (-half) ** (k - l) for l in range(k + 1)), Fraction(0))
            for k in range(i + 1)
        ]
    else:
        raise ValidationError(f"unknown Appell kind {kind!r}")
    out = Poly()
    for j in range(i + 1):
        out = out + X**j * (math.comb(i, j) * shift[i - j])
    return out


def exponential_polynomial(i: int, x: str = "x") -> Poly:
    """Touchard polynomial ``Φ_i(x) = Σ_k S(i,k) x^k``."""
    if i < 0:
        raise ValidationError("i must be >= 0")
    X = Poly.var(x)
    out = Poly()
    for k in range(i + 1):
        out = out + X**k * stirling2(i, k)
    return out


def bell_polynomials(mode: str, args: Sequence[Any], i: int, k: int | None = None) -> Any:
    """Partial ``B_{i,k}(x_1, x_2, ...)`` or complete ``Y_i(x_1, x_2, ...)`` Bell polynomials.

    ``args[0]`` is ``x_1``. Values may be rationals or polynomials.
    """
    if mode == "partial":
        if k is None:
            raise ValidationError("partial Bell polynomials need k")
        if i == 0 and k == 0:
            return Fraction(1)
        if k < 1 or k > i:
            return Fraction(0)
        need = i - k + 1
    elif mode == "complete":
        if i == 0:
            return Fraction(1)
        need = i
    else:
        raise ValidationError(f"unknown Bell polynomial mode {mode!r}")
    if len(args) < need:
        raise ValidationError(f"need {need} arguments, got {len(args)}")
    vals = [None] + [a if isinstance(a, Poly) else as_rational(a) for a in args[:need]]
    total: Any = Fraction(0)
    for lam in integer_partitions(i):
        if mode == "partial" and lam.length != k:
            continue
        total = total + partition_product(vals, lam) * lam.d
    return total


def generalized_bell(alpha: Sequence[Any] | None, gamma: Sequence[Any], i: int, k: int, x: Any = "x") -> Any:
    """``𝔹^{(γ)}_{i,k}(x) = C(i,k) E[(x + k·γ)^{i-k}]``.

    With ``alpha`` given, ``x`` is replaced umbrally by ``α`` (``x^j -> a_j``).
    """
    if k > i or k < 0:
        raise ValidationError("generalized Bell polynomials need 0 <= k <= i")
    X = _symbol(x)
    if k == 0:
        # 0·γ is the augmentation umbra, so no moments of γ are needed
        return as_rational(alpha[i]) if alpha is not None else _pow(X, i)
    total: Any = Fraction(0)
    for j in range(i - k + 1):
        xj = as_rational(alpha[j]) if alpha is not None else _pow(X, j)
        total = total + xj * (math.comb(i - k, j) * dot_scalar(gamma, k, i - k - j))
    return total * math.comb(i, k)


# --------------------------------------------------------------------------
# Sheffer sequences and coefficient arrays


def sheffer_polynomial(alpha: Sequence[Any], gamma: Sequence[Any], i: int, x: str = "x") -> Poly:
    """``s_i(x) = E[(α + x·β·γ^{<-1>})^i]`` for the Sheffer pair ``(α, γ)``."""
    if len(gamma) < 2 or gamma[1] == 0:
        raise ValidationError("gamma needs a nonzero first moment")
    ginv = compositional_inverse(gamma, i)
    X = Poly.var(x)
    adjoint: list[Poly] = []
    for j in range(i + 1):
        acc = Poly()
        for lam in integer_partitions(j):
            acc = acc + X**lam.length * (lam.d * partition_product(ginv, lam))
        adjoint.append(acc)
    out = Poly()
    for j in range(i + 1):
        out = out + adjoint[j] * (math.comb(i, j) * as_rational(alpha[i - j]))
    return out


def riordan_array(g: Sequence[Any], f: Sequence[Any], order: int) -> list[list[Fraction]]:
    """Exponential Riordan array of the pair ``(f(g,z), f(φ,z) - 1)`` up to ``order``.

    Entry ``[i][k]`` is the coefficient of ``z^i/i!`` in ``f(g,z)(f(φ,z)-1)^k/k!``,
    computed as ``E[𝔹^{(ω)}_{i,k}(g)]`` where ``ω`` is the primitive umbra of
    ``φ``. Requires ``φ_1 = 1``.
    """
    if len(f) <= order or len(g) <= order:
        raise ValidationError(f"need moments up to order {order}")
    if as_rational(f[1]) != 1:
        raise ValidationError("the second element of the pair must have first moment 1")
    omega = primitive_umbra(f[: order + 1]) if order >= 1 else MomentSeq((Fraction(1),))
    rows = []
    for i in range(order + 1):
        row = []
        for k in range(order + 1):
            row.append(generalized_bell(g, omega, i, k) if k <= i else Fraction(0))
        rows.append(row)
    return rows


def sheffer_coefficients(alpha: Sequence[Any], gamma: Sequence[Any], order: int) -> list[list[Fraction]]:
    """``c[i][k]``: coefficient of ``x^k`` in the Sheffer polynomial ``s_i(x)`` of ``(α, γ)``.

    Requires ``E[γ] = 1``.
    """
    if as_rational(gamma[1]) != 1:
        raise ValidationError("sheffer_coefficients assumes E[gamma] = 1")
    return riordan_array(alpha, compositional_inverse(gamma, order), order)


def connection_constants(source: tuple[Sequence[Any], Sequence[Any]], target: tuple[Sequence[Any], Sequence[Any]], order: int) -> list[list[Fraction]]:
    """``b[i][k]`` with ``r_i(x) = Σ_k b[i][k] s_k(x)``.

    ``s`` is the Sheffer sequence of ``source = (α, γ)`` and ``r`` that of
    ``target = (ξ, ζ)``. The array is the Riordan array of the pair
    ``(f(ξ,z)/f(α, w(z)), w(z))`` with ``w = f(γ·β·ζ^{<-1>}, z) - 1``.
    """
    alpha, gamma = source
    xi, zeta = target
    for name, umb in (("gamma", gamma), ("zeta", zeta)):
        if as_rational(umb[1]) != 1:
            raise ValidationError(f"connection_constants assumes E[{name}] = 1")
    zinv = compositional_inverse(zeta, order)
    w = composition_umbra(gamma, zinv, order)
    # f(α, w(z)) is the composition of α with the umbra of w
    f_alpha_w = TruncatedSeries(tuple(composition_umbra(alpha, w, order)))
    rho = series_multiply(TruncatedSeries(tuple(as_rational(v) for v in xi[: order + 1])), series_reciprocal(f_alpha_w))
    return riordan_array(rho.coeffs, w, order)


# --------------------------------------------------------------------------
# Lagrange inversion, Kailath-Segall, volume polynomials


def lagrange_inverse(gamma: Sequence[Any], order: int) -> MomentSeq:
    """Moments of ``(γ_D)^{<-1>}``: ``E[((γ_D)^{<-1>})^i] = E[(-i·γ)^{i-1}]``."""
    if len(gamma) < order:
        raise ValidationError(f"need moments of gamma up to order {order - 1}")
    return MomentSeq((Fraction(1),) + tuple(dot_scalar(gamma, -i, i - 1) for i in range(1, order + 1)))


def kailath_segall(i: int, symbol: str = "X") -> Poly:
    """``P^{(i)} = (1/i) Σ_{j=1}^{i} (-1)^{j+1} P^{(i-j)} X^{(j)}`` with ``P^{(0)} = 1``."""
    if i < 0:
        raise ValidationError("i must be >= 0")
    P = [Poly.const(1)]
    for m in range(1, i + 1):
        acc = Poly()
        for j in range(1, m + 1):
            acc = acc + P[m - j] * Poly.var(f"{symbol}{j}") * (-1) ** (j + 1)
        P.append(acc * Fraction(1, m))
    return P[i]


def volume_polynomial(i: int, values: Sequence[Any] | None = None, *, evaluation: str = "plain") -> Any:
    """Volume polynomial ``V_i(x) = (1/i!) Σ_{parking p} Π_j x_{p_j}``.

    ``evaluation="plain"`` substitutes ``x_j = values[j-1]`` (or returns the
    polynomial when ``values`` is omitted). ``evaluation="umbral"`` treats the
    ``x_j`` as uncorrelated umbrae with ``E[x_j^e] = e! values[e-1]``; with
    free cumulants as ``values`` this returns the moment ``a_i``.
    """
    if i < 1:
        raise ValidationError("i must be >= 1")
    counts: dict[tuple[int, ...], int] = {}
    for pf in parking_functions(i):
        exps = [0] * i
        for v in pf:
            exps[v - 1] += 1
        key = tuple(exps)
        counts[key] = counts.get(key, 0) + 1
    scale_ = Fraction(1, math.factorial(i))
    if evaluation == "plain":
        if values is None:
            out = Poly()
            for exps, c in counts.items():
                mono = tuple((f"x{j + 1}", e) for j, e in enumerate(exps) if e)
                out = out + Poly({mono: Fraction(c)})
            return out * scale_
        vals = [as_rational(v) for v in values]
        if len(vals) < i:
            raise ValidationError(f"need {i} values")
        return scale_ * sum((c * math.prod(vals[j] ** e for j, e in enumerate(exps)) for exps, c in counts.items()), Fraction(0))
    if evaluation == "umbral":
        if values is None:
            raise ValidationError("umbral evaluation needs values")
        vals = [as_rational(v) for v in values]
        if len(vals) < i:
            raise ValidationError(f"need {i} values")
        lifted = [Fraction(1)] + [math.factorial(e) * vals[e - 1] for e in range(1, i + 1)]
        return scale_ * sum((c * math.prod(lifted[e] for e in exps) for exps, c in counts.items()), Fraction(0))
    raise ValidationError(f"unknown evaluation {evaluation!r}")
