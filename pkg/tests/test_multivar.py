from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given

from momentforge.cumulants import moments_to_cumulants
from momentforge.kernel import Poly, ValidationError
from momentforge.multivar import (
    CovarianceSpec,
    bernoulli_table,
    lower_x,
    multivariate_bernoulli,
    multivariate_composition,
    multivariate_cumulants,
    multivariate_dot,
    multivariate_hermite,
    process_table,
    quadratic_table,
)
from momentforge.oracle import multivariate_series_compose
from momentforge.umbral import MultiMomentTable, composition_umbra, multi_indices

from conftest import moment_sequences


def random_table(rng: random.Random, dim: int, order: int) -> MultiMomentTable:
    return MultiMomentTable.from_function(dim, order, lambda i: 1 if not any(i) else Fraction(rng.randint(-5, 5), rng.randint(1, 4)))


@pytest.mark.parametrize("seed", range(6))
def test_composition_matches_oracle(seed):
    rng = random.Random(seed)
    k, d = rng.randint(1, 3), rng.randint(1, 3)
    order = 5 if k * d < 6 else 4
    outer = random_table(rng, k, order)
    inners = [random_table(rng, d, order) for _ in range(k)]
    for idx, v in multivariate_series_compose(outer, inners, order).items():
        assert multivariate_composition(outer, inners, idx) == v


def test_shared_inner_broadcast():
    rng = random.Random(9)
    outer, inner = random_table(rng, 2, 4), random_table(rng, 2, 4)
    for idx in multi_indices(2, 4):
        assert multivariate_composition(outer, inner, idx) == multivariate_composition(outer, [inner, inner], idx)


@given(moment_sequences(5), moment_sequences(5))
def test_univariate_case(g, a):
    ref = composition_umbra(g, a, 5)
    assert tuple(multivariate_composition(g, a, (i,)) for i in range(6)) == ref.moments


def test_shape_errors():
    rng = random.Random(1)
    outer = random_table(rng, 2, 3)
    with pytest.raises(ValidationError):
        multivariate_composition(outer, [random_table(rng, 1, 3)] * 3, (1,))
    with pytest.raises(ValidationError):
        multivariate_composition(outer, random_table(rng, 2, 3), (1,))


def test_dot_binomial_in_m():
    rng = random.Random(4)
    mu = random_table(rng, 2, 4)
    m1, m2 = Poly.var("m1"), Poly.var("m2")
    from math import comb

    for i in multi_indices(2, 4):
        left = multivariate_dot(mu, m1 + m2, i)
        right = Poly()
        for j0 in range(i[0] + 1):
            for j1 in range(i[1] + 1):
                right = right + multivariate_dot(mu, m1, (j0, j1)) * multivariate_dot(mu, m2, (i[0] - j0, i[1] - j1)) * (comb(i[0], j0) * comb(i[1], j1))
        assert Poly.const(left) == right


def test_dot_numeric():
    mu = MultiMomentTable({(0,): 1, (1,): 1, (2,): 1, (3,): 1})
    assert [multivariate_dot(mu, 1, (i,)) for i in range(4)] == [1, 1, 1, 1]
    assert multivariate_dot(mu, 2, (2,)) == 2 + 2


@pytest.mark.parametrize("seed", range(3))
def test_cumulant_roundtrip(seed):
    mu = random_table(random.Random(seed), 2, 6)
    c = multivariate_cumulants(mu, 6)
    assert multivariate_cumulants(c, 6, inverse=True) == mu
    assert c[(1, 1)] == mu[(1, 1)] - mu[(1, 0)] * mu[(0, 1)]


@given(moment_sequences(6))
def test_cumulants_on_one_coordinate(a):
    table = MultiMomentTable.from_function(2, 6, lambda i: a[i[0]] if i[1] == 0 else (1 if not any(i) else 0))
    c = multivariate_cumulants(table, 6)
    uni = moments_to_cumulants(a, "classical")
    for idx in multi_indices(2, 6):
        if not any(idx):
            continue
        assert c[idx] == (uni[idx[0]] if idx[1] == 0 else 0)


def test_covariance_spec():
    CovarianceSpec(((2, 1), (1, 1)), factor=((1, 1), (0, 1)))
    with pytest.raises(ValidationError):
        CovarianceSpec(((2, 1), (1, 1)), factor=((1, 0), (0, 1)))
    with pytest.raises(ValidationError):
        CovarianceSpec(((1, 2), (0, 1)))
    with pytest.raises(ValidationError):
        CovarianceSpec(((1, 1), (1, 1))).inverse()


def test_hermite_univariate():
    t = Poly.var("t")
    x = Poly.var("x1")
    assert multivariate_hermite((2,), [[1]], t="t") == x**2 - t
    assert multivariate_hermite((3,), [[1]]) == x**3 - 3 * x
    # with variance 4 the H variant is a Hermite polynomial in x/4 with variance 1/4
    assert multivariate_hermite((2,), [[4]], "H") == (x * Fraction(1, 4)) ** 2 - Fraction(1, 4)


SIGMA = [[2, 1], [1, 3]]


@pytest.mark.parametrize("i", [(1, 1), (2, 1), (2, 2), (3, 1), (0, 3)])
def test_hermite_time_space_harmonic(i):
    H = multivariate_hermite(i, SIGMA, t="t")
    moments = process_table(quadratic_table(SIGMA, sum(i)), "t", sum(i))
    assert lower_x(H, lambda e: moments[e], 2).is_zero()


@pytest.mark.parametrize("i", [(1, 0), (1, 1), (2, 1), (1, 2), (3, 0)])
def test_hermite_variants_related(i):
    spec = CovarianceSpec(tuple(map(tuple, SIGMA)))
    inv = spec.inverse()
    H = multivariate_hermite(i, spec, "H")
    tilde = multivariate_hermite(i, [list(r) for r in inv])
    xs = [Poly.var("x1"), Poly.var("x2")]
    ys = {f"x{b + 1}": sum((xs[a] * inv[a][b] for a in range(2)), Poly()) for b in range(2)}
    assert H == tilde.subs(ys)


def test_hermite_h_value():
    H = multivariate_hermite((1, 1), SIGMA, "H")
    assert H.to_json() == {"x1^2": "-3/25", "x1*x2": "7/25", "x2^2": "-2/25", "1": "1/5"}


def test_bernoulli_univariate_matches_appell():
    from momentforge.polyfam import appell_bernoulli_euler

    B = multivariate_bernoulli((3,), 1)
    assert B.subs({"x1": Poly.var("x")}) == appell_bernoulli_euler("bernoulli", 3)


@pytest.mark.parametrize("v", [(1, 1), (2, 1), (2, 2), (1, 1, 1)])
def test_bernoulli_zero_mean(v):
    B = multivariate_bernoulli(v)
    table = bernoulli_table(len(v), sum(v))
    minus_t = -Poly.var("t")
    assert lower_x(B, lambda e: multivariate_dot(table, minus_t, e), len(v)).is_zero()
