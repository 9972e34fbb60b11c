from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from momentforge.combinat import (
    bell,
    bernoulli,
    catalan,
    euler,
    integer_partitions,
    is_interval,
    is_noncrossing,
    lattice_partitions,
    multi_index_partitions,
    multiset_subdivisions,
    named_numbers,
    parking_functions,
    set_partitions,
    stirling1,
    stirling2,
    vector_partitions,
)
from momentforge.kernel import CapExceeded, ValidationError


def test_partition_counts():
    assert [len(integer_partitions(i)) for i in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


@pytest.mark.parametrize("i", range(1, 9))
def test_d_lambda_sums_to_bell(i):
    assert sum(lam.d for lam in integer_partitions(i)) == bell(i)


def test_d_lambda_values():
    by_parts = {lam.parts: lam.d for lam in integer_partitions(4)}
    assert by_parts[(2, 2)] == 3
    assert by_parts[(2, 1, 1)] == 6
    assert by_parts[(4,)] == 1


def test_set_partition_lattices():
    assert [len(set_partitions(n)) for n in range(1, 8)] == [bell(n) for n in range(1, 8)]
    assert [len(lattice_partitions("noncrossing", n)) for n in range(1, 8)] == [catalan(n) for n in range(1, 8)]
    assert [len(lattice_partitions("interval", n)) for n in range(1, 8)] == [2 ** (n - 1) for n in range(1, 8)]
    crossing = ((1, 3), (2, 4))
    assert not is_noncrossing(crossing)
    assert not is_interval(((1, 3), (2,)))


def test_set_partition_cap():
    with pytest.raises(CapExceeded):
        set_partitions(13)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3).filter(lambda v: 0 < sum(v) <= 6))
def test_multi_index_weights_count_set_partitions(target):
    # Σ weight counts set partitions of a coloured set: the multivariate Bell number
    total = sum(p.weight for p in multi_index_partitions(target))
    assert total == bell(sum(target))
    for p in multi_index_partitions(target):
        assert tuple(map(sum, zip(*p.columns))) == tuple(target)
        assert list(p.columns) == sorted(p.columns)


def test_multi_index_example():
    cols = sorted(p.columns for p in multi_index_partitions((2, 1)))
    assert len(cols) == 4
    assert ((0, 1), (1, 0), (1, 0)) in cols


def test_vector_partitions_scalar():
    assert len(list(vector_partitions((6,)))) == 11


def test_multiset_subdivisions():
    subs = multiset_subdivisions(["a", "a", "b"])
    # d_S sums to the number of set partitions of three labelled items
    assert sum(s.d for s in subs) == 5
    assert len(subs) == 4
    with pytest.raises(ValidationError):
        multiset_subdivisions([])


def test_named_numbers():
    assert [stirling2(5, k) for k in range(6)] == [0, 1, 15, 25, 10, 1]
    assert [stirling1(4, k) for k in range(5)] == [0, -6, 11, -6, 1]
    assert [bernoulli(i) for i in range(5)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]
    assert [euler(i) for i in range(7)] == [1, 0, -1, 0, 5, 0, -61]
    assert named_numbers("bell", 5) == 52
    assert named_numbers("stirling2", 4, 2) == 7


@pytest.mark.parametrize("n", range(1, 7))
def test_stirling_inverse(n):
    for m in range(1, n + 1):
        s = sum(stirling2(n, k) * stirling1(k, m) for k in range(m, n + 1))
        assert s == (1 if m == n else 0)


def test_parking_functions():
    assert [len(parking_functions(n)) for n in range(1, 6)] == [(n + 1) ** (n - 1) for n in range(1, 6)]
    for p in parking_functions(4):
        s = sorted(p)
        assert all(s[j] <= j + 1 for j in range(4))
    assert Counter(len(set(p)) for p in parking_functions(3))[3] == math.factorial(3)
