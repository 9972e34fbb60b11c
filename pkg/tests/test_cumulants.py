from __future__ import annotations


import pytest
from hypothesis import given

from momentforge.cumulants import (
    CumulantKind,
    abel_type_matrix,
    cumulants_to_moments,
    moments_to_cumulants,
)
from momentforge.kernel import ValidationError
from momentforge.umbral import binomial_convolution, named_umbra

from conftest import moment_sequences, rationals

KINDS = ["classical", "boolean", "free", "abel:3", "abel:1"]


def test_kind_parse():
    assert CumulantKind.parse("abel(4)").m == 4
    assert CumulantKind.parse("abel:4") == CumulantKind.parse("abel(4)")
    with pytest.raises(ValidationError):
        CumulantKind.parse("weird")


def test_canonical_sequences():
    assert moments_to_cumulants(named_umbra("bell", 6), "classical").values == (1,) * 6
    assert moments_to_cumulants(named_umbra("catalan", 6), "free").values == (1,) * 6
    assert moments_to_cumulants([1] + [2 ** (i - 1) for i in range(1, 7)], "boolean").values == (1,) * 6
    gauss = [1, 0, 1, 0, 3, 0, 15]
    assert moments_to_cumulants(gauss, "classical").values == (0, 1, 0, 0, 0, 0)


def test_empty_order():
    assert moments_to_cumulants([1], "free").values == ()


@pytest.mark.parametrize("kind", KINDS)
@given(a=moment_sequences(7))
def test_roundtrip(kind, a):
    c = moments_to_cumulants(a, kind)
    assert cumulants_to_moments(c).moments == tuple(a)


@given(moment_sequences(6))
def test_variance(a):
    var = a[2] - a[1] ** 2
    for kind in ("classical", "boolean", "free"):
        c = moments_to_cumulants(a, kind)
        assert c[1] == a[1]
        assert c[2] == var


@given(moment_sequences(6), rationals)
def test_semi_invariance(a, shift):
    point = [shift**i for i in range(7)]
    moved = binomial_convolution(a, point)
    before = moments_to_cumulants(a, "classical")
    after = moments_to_cumulants(moved, "classical")
    assert after[1] == before[1] + shift
    assert after.values[1:] == before.values[1:]


def test_free_of_semicircle():
    # centred semicircle: Catalan numbers at even orders, only r_2 survives
    a = [1, 0, 1, 0, 2, 0, 5, 0, 14]
    assert moments_to_cumulants(a, "free").values == (0, 1, 0, 0, 0, 0, 0, 0)


def test_abel_matrix_rows():
    a = named_umbra("bell", 4)
    rows = abel_type_matrix(a, 2, 4)
    assert len(rows) == 4 and all(len(r) == 2 for r in rows)
    # column m = 1 holds the classical cumulants
    assert [r[0] for r in rows] == list(moments_to_cumulants(a, "classical").values)
    assert [r[1] for r in rows] == list(moments_to_cumulants(a, "abel:2").values)
