from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from momentforge.kernel import ValidationError
from momentforge.sheppard import (
    SheppardConfig,
    sheppard_correct,
    sheppard_discrete,
    sheppard_group,
    sheppard_multivariate,
    shift_moments,
)
from momentforge.umbral import MultiMomentTable

from conftest import moment_sequences


def smoothed_uniform_moments(h: sp.Rational, order: int) -> list[Fraction]:
    """Grouped moments of the uniform density on [0, 1], integrated exactly with sympy."""
    x, z = sp.symbols("x z")
    out = []
    for i in range(order + 1):
        v = sp.integrate(sp.integrate(x**i, (x, -z, 1 - z)), (z, -h / 2, h / 2)) / h
        out.append(Fraction(int(v.p), int(v.q)))
    return out


@pytest.mark.parametrize("q", [2, 4, 5])
def test_uniform_ground_truth(q):
    grouped = smoothed_uniform_moments(sp.Rational(1, q), 6)
    assert sheppard_correct(grouped, Fraction(1, q)).moments == tuple(Fraction(1, i + 1) for i in range(7))


def test_second_moment_symbolic():
    h, m, a1, a2 = sp.symbols("h m a1 a2")
    out = sheppard_discrete([1, 0, Fraction(1, 3)], "h", "m")
    assert sp.simplify(out[2] - (sp.Rational(1, 3) - h**2 / 12 + h**2 / (12 * m**2))) == 0
    cont = sheppard_correct([1, 0, Fraction(1, 3)], "h")
    assert sp.simplify(cont[2] - (sp.Rational(1, 3) - h**2 / 12)) == 0


@given(moment_sequences(6), st.integers(1, 5))
def test_discrete_m1_is_identity(a, hden):
    assert sheppard_discrete(a, Fraction(1, hden), 1).moments == tuple(a)


@given(moment_sequences(6))
def test_group_then_correct(a):
    h = Fraction(1, 3)
    assert sheppard_correct(sheppard_group(a, h), h).moments == tuple(a)
    assert sheppard_discrete(sheppard_group(a, h, m=4), h, 4).moments == tuple(a)


def test_discrete_population_exact():
    # parent X plus an independent symmetric offset on m points spaced h/m
    h, m = Fraction(1, 4), 3
    offsets = [h / m * (r - Fraction(m - 1, 2)) for r in range(m)]
    xs = [Fraction(k, 7) for k in range(5)]
    grouped_vals = [x + d for x in xs for d in offsets]
    true = tuple(sum(x**i for x in xs) / len(xs) for i in range(7))
    grouped = [sum(v**i for v in grouped_vals) / len(grouped_vals) for i in range(7)]
    assert sheppard_discrete(grouped, h, m).moments == true


def test_shift_moments_low():
    s = shift_moments(Fraction(1), 4)
    assert s[:3] == [1, 0, Fraction(-1, 12)]


def test_multivariate_reduces_to_univariate():
    a = [1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5)]
    table = MultiMomentTable({(i,): v for i, v in enumerate(a)})
    out = sheppard_multivariate(table, SheppardConfig(("1/2",)), (4,))
    assert tuple(out[(i,)] for i in range(5)) == sheppard_correct(a, Fraction(1, 2)).moments


def test_multivariate_product_table():
    # independent coordinates: the corrected table factorizes
    a = [1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]
    b = [1, Fraction(2), Fraction(5), Fraction(1)]
    table = MultiMomentTable({(i, j): a[i] * b[j] for i in range(4) for j in range(4)})
    out = sheppard_multivariate(table, SheppardConfig((Fraction(1, 2), Fraction(1, 3)), (None, 2)), (3, 3))
    ca = sheppard_correct(a, Fraction(1, 2))
    cb = sheppard_discrete(b, Fraction(1, 3), 2)
    for i in range(4):
        for j in range(4):
            assert out[(i, j)] == ca[i] * cb[j]


def test_validation():
    with pytest.raises(ValidationError):
        sheppard_discrete([1, 0, 1], 1, 0)
    with pytest.raises(ValidationError):
        sheppard_correct([1, 0], 1, order=3)
    with pytest.raises(ValidationError):
        SheppardConfig(("1",), ("2", "3"))
