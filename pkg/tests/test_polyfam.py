from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given

from momentforge.combinat import stirling2
from momentforge.cumulants import moments_to_cumulants
from momentforge.kernel import Poly, ValidationError
from momentforge.polyfam import (
    FAMILIES,
    FamilySpec,
    appell_bernoulli_euler,
    bell_polynomials,
    connection_constants,
    exponential_polynomial,
    family,
    family_base,
    generalized_bell,
    kailath_segall,
    lagrange_inverse,
    process_expectation,
    riordan_array,
    sheffer_coefficients,
    sheffer_polynomial,
    tsh_polynomial,
    volume_polynomial,
)
from momentforge.umbral import compositional_inverse, derivative_umbra, named_umbra

from conftest import moment_sequences

x, t = Poly.var("x"), Poly.var("t")


def test_hermite_low_degrees():
    assert family("hermite", 2) == x**2 - t
    assert family("hermite", 3) == x**3 - 3 * t * x


@pytest.mark.parametrize("name", FAMILIES)
@pytest.mark.parametrize("k", range(1, 7))
def test_family_zero_mean(name, k):
    spec = FamilySpec(name)
    base, time = family_base(spec, k)
    assert process_expectation(family(spec, k), base, time=time, x="x").is_zero()


@given(moment_sequences(5))
def test_tsh_random_base(alpha):
    for i in range(1, 6):
        assert process_expectation(tsh_polynomial(alpha, i), alpha).is_zero()


def test_family_parameters():
    assert family(FamilySpec("hermite", s=2), 2) == x**2 - 4 * t
    with pytest.raises(ValidationError):
        FamilySpec("krawtchouk", p=2)
    with pytest.raises(ValidationError):
        FamilySpec("unknown")


def test_appell():
    assert appell_bernoulli_euler("bernoulli", 2) == x**2 - x + Fraction(1, 6)
    assert appell_bernoulli_euler("euler", 1) == x - Fraction(1, 2)


@pytest.mark.parametrize("i", range(0, 7))
def test_touchard(i):
    assert exponential_polynomial(i) == sum((x**k * stirling2(i, k) for k in range(i + 1)), Poly())


def test_bell_polynomials():
    assert bell_polynomials("partial", [1, 1, 1, 1], 4, 2) == stirling2(4, 2)
    assert bell_polynomials("complete", [1] * 5, 5) == 52


def test_generalized_bell_k0():
    assert generalized_bell(None, [1, 1], 3, 0) == x**3
    assert generalized_bell([1, 2, 3, 4], [1, 1], 3, 0) == 4


def test_riordan_stirling():
    rows = riordan_array(named_umbra("epsilon", 6), named_umbra("unity", 6), 6)
    assert rows == [[Fraction(stirling2(i, k)) for k in range(7)] for i in range(7)]


def test_sheffer_coefficients_match_polynomials():
    alpha = [1, 2, Fraction(1, 3), 0, 5, 1]
    gamma = [1, 1, 3, -1, 2, 7]
    coeffs = sheffer_coefficients(alpha, gamma, 5)
    for i in range(6):
        poly = sheffer_polynomial(alpha, gamma, i)
        assert [poly.coeff({"x": k} if k else ()) for k in range(6)] == coeffs[i]


def test_connection_constants():
    src = ([1, 1, 2, 0, 1], [1, 1, 1, 2, 3])
    dst = ([1, 0, 1, 0, 3], [1, 1, 0, 0, 0])
    b = connection_constants(src, dst, 4)
    for i in range(5):
        r = sheffer_polynomial(*dst, i)
        combo = sum((sheffer_polynomial(*src, k) * b[i][k] for k in range(i + 1)), Poly())
        assert r == combo
    same = connection_constants(src, src, 4)
    assert same == [[Fraction(int(i == k)) for k in range(5)] for i in range(5)]


def test_lagrange():
    u = named_umbra("unity", 9)
    got = lagrange_inverse(u, 3)
    assert got.moments == (1, 1, -2, 9)
    assert lagrange_inverse(u, 8) == compositional_inverse(derivative_umbra(u)[:9], 8)


@given(moment_sequences(8))
def test_lagrange_agrees_with_solver(g):
    assert lagrange_inverse(g, 8) == compositional_inverse(derivative_umbra(g)[:9], 8)


@pytest.mark.parametrize("i", range(1, 7))
def test_kailath_segall_is_complete_bell(i):
    args = [Poly.var(f"X{j}") * ((-1) ** (j - 1) * math.factorial(j - 1)) for j in range(1, i + 1)]
    assert kailath_segall(i) * math.factorial(i) == bell_polynomials("complete", args, i)


def test_kailath_segall_two():
    assert str(kailath_segall(2)) == "1/2*X1^2 - 1/2*X2"


@pytest.mark.parametrize("i", range(1, 6))
def test_volume_polynomials_free(i):
    rng = random.Random(i)
    a = [Fraction(1)] + [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(i)]
    r = moments_to_cumulants(a, "free").values
    assert volume_polynomial(i, r, evaluation="umbral") == a[i]


def test_volume_plain_count():
    # plain evaluation at all ones counts parking functions
    assert volume_polynomial(3, [1, 1, 1]) * 6 == 16
