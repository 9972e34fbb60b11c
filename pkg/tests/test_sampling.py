from __future__ import annotations

import statistics
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from momentforge.kernel import CapExceeded, Poly, RationalFunctionInN, ValidationError
from momentforge.oracle import naive_kstatistic
from momentforge.sampling import (
    Factor,
    cumulant_in_moments,
    evaluate_on_sample,
    expectation_of_product,
    expectation_of_statistic,
    k_statistic,
    moments_polykays_mobius,
    polykay,
    power_sum_expectation,
    power_to_augmented,
)

from conftest import rationals

n = RationalFunctionInN.n()
a1, a2, a3 = (Poly.var(f"a{i}") for i in (1, 2, 3))


def test_power_sum_expectations():
    assert power_sum_expectation({1: 2}) == a2 * n + a1**2 * (n * n - n)
    assert power_sum_expectation([(1, 1), (2, 1)]) == a3 * n + a1 * a2 * (n * n - n)


def test_multivariate_factors():
    got = expectation_of_product([Factor((1, 0)), Factor((0, 1))])
    m11, m10, m01 = (Poly.var(s) for s in ("m_1_1", "m_1_0", "m_0_1"))
    assert got == m11 * n + m10 * m01 * (n * n - n)


def test_singleton_tags_kill_blocks():
    # two copies of one singleton can never share a block
    got = expectation_of_product([Factor((1,), singleton="x"), Factor((1,), singleton="x")])
    assert got == a1**2 * (n * n - n)


def test_numeric_n_and_joints():
    got = expectation_of_product([1, 1], joints={(1,): 2, (2,): 5}, n=3)
    assert got == Poly.const(3 * 5 + 6 * 4)
    with pytest.raises(ValidationError):
        expectation_of_product([1, 1], joints={(1,): 2})


def test_kstat_low_orders():
    assert k_statistic(1).to_json() == {"S1": "1/n"}
    assert k_statistic(2).to_json() == {"S1^2": "-1/(n^2 - n)", "S2": "1/(n - 1)"}


@pytest.mark.parametrize("i", range(1, 9))
def test_kstat_unbiased(i):
    assert expectation_of_statistic(k_statistic(i)) == cumulant_in_moments(i)


@pytest.mark.parametrize("i", range(1, 9))
def test_kstat_fast_equals_naive(i):
    assert k_statistic(i) == naive_kstatistic(i)


@pytest.mark.parametrize("idx", [(1, 1), (2, 1), (3, 2), (2, 2), (4, 2), (1, 1, 1), (2, 1, 1)])
def test_polykay_unbiased(idx):
    want = Poly.const(1)
    for r in idx:
        want = want * cumulant_in_moments(r)
    assert expectation_of_statistic(polykay(idx)) == want


def test_polykay_symmetric():
    assert polykay((3, 1)) == polykay((1, 3))
    assert polykay((4,)) == k_statistic(4)


def test_k16_structure():
    k16 = k_statistic(16)
    assert len(k16.terms) == 231
    with pytest.raises(CapExceeded):
        k_statistic(21)


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=8))
def test_k2_is_unbiased_variance(sample):
    assert evaluate_on_sample(k_statistic(2), sample) == statistics.variance([Fraction(x) for x in sample])


@given(st.lists(rationals, min_size=1, max_size=6))
def test_k1_is_mean(sample):
    assert evaluate_on_sample(k_statistic(1), sample) == sum(sample) / len(sample)


def test_power_to_augmented_plain():
    # with m = n the coefficients are the d_λ
    rows = {lam.parts: c for lam, c in power_to_augmented(3, "n")}
    assert rows == {(3,): 1, (2, 1): 3, (1, 1, 1): 1}


def test_mobius_moments_polykays():
    pi = [[1, 2], [3]]
    prods = moments_polykays_mobius("products", pi)
    c1, c2 = Poly.var("c1"), Poly.var("c2")
    assert prods == (c2 + c1**2) * c1
    back = moments_polykays_mobius("polykays", pi)
    assert back == (a2 - a1**2) * a1
