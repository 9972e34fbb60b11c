from __future__ import annotations

import random
from fractions import Fraction

import pytest

from momentforge.kernel import CapExceeded, TruncatedSeries, series_compose
from momentforge.oracle import (
    classical_mobius_closed_form,
    cumulants_via_lattice,
    mobius_to_top,
    multivariate_series_compose,
    naive_kstatistic,
)
from momentforge.umbral import MultiMomentTable


def test_small_lattice_values():
    a = [1, Fraction(2), Fraction(7)]
    assert cumulants_via_lattice(a, "classical", 2) == 7 - 4
    for kind in ("classical", "boolean", "free"):
        assert cumulants_via_lattice(a, kind, 1) == 2


@pytest.mark.parametrize("n", range(1, 8))
def test_recursive_mobius_matches_closed_form(n):
    for p, mu in mobius_to_top("all", n).items():
        assert mu == classical_mobius_closed_form(p)


def test_boolean_mobius_is_sign():
    for p, mu in mobius_to_top("interval", 5).items():
        assert mu == (-1) ** (len(p) - 1)


def test_caps():
    with pytest.raises(CapExceeded):
        cumulants_via_lattice([1] * 12, "free", 11)
    with pytest.raises(CapExceeded):
        naive_kstatistic(9)


def test_naive_k1():
    assert {k: str(v) for k, v in naive_kstatistic(1).to_json().items()} == {"S1": "1/n"}


def test_series_compose_identity_inner():
    rng = random.Random(3)
    outer = MultiMomentTable.from_function(2, 4, lambda i: 1 if not any(i) else Fraction(rng.randint(-4, 4)))
    ident = MultiMomentTable.from_function(1, 4, lambda i: 1 if i[0] <= 1 else 0)
    out = multivariate_series_compose(outer, [ident, ident], 4)
    # with z_1 = z_2 = z the result is the diagonal sum Σ C(i, j) outer[j, i-j]
    from math import comb

    for (i,), v in out.items():
        assert v == sum(comb(i, j) * outer[(j, i - j)] for j in range(i + 1))


def test_univariate_matches_kernel():
    g, a = (1, 2, -1, 3, 0, 5), (1, 1, 4, -2, 7, 1)
    out = multivariate_series_compose(list(g), [list(a)], 5)
    ref = series_compose(TruncatedSeries(g), TruncatedSeries(a))
    assert tuple(out[(i,)] for i in range(6)) == ref.coeffs
