from fractions import Fraction
from functools import cache

import pytest
from hypothesis import given, settings, strategies as st

from cosetfusion.qseries import (
    QSeries,
    TruncationError,
    e8_gram,
    eta_inverse_series,
    eta_series,
    euler_product,
    first_difference,
    lattice_norm_counts,
    partition_numbers,
    sigma3,
    theta_e8,
    theta_sqrt2_e8,
)


@cache
def parts(n, k):
    """Partitions of n into parts of size at most k."""
    if n == 0:
        return 1
    if k == 0:
        return 0
    return parts(n, k - 1) + (parts(n - k, k) if n >= k else 0)


def test_partitions_against_recursion():
    assert partition_numbers(51) == [parts(n, n) for n in range(51)]


def test_euler_pentagonal():
    # nonzero terms sit at generalized pentagonal numbers with signs +,-,-,+,+,...
    e = euler_product(41)
    pent = {}
    for k in range(1, 7):
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            pent[g] = (-1) ** k
    pent[0] = 1
    assert {int(x): c for x, c in e.items()} == {g: c for g, c in pent.items() if g < 41}


def test_eta_times_inverse():
    prod = eta_series(20) * eta_inverse_series(20)
    assert prod.coefficients(1, 0) == [1] + [0] * 19


def test_eta_leading():
    eta = eta_series(5)
    assert eta.leading_exponent() == Fraction(1, 24)
    assert eta_inverse_series(5).leading_exponent() == Fraction(-1, 24)


def test_half_integer_exponents():
    h = QSeries.monomial(Fraction(1, 2))
    assert h * h == QSeries.monomial(1)
    assert (h * h).coefficient(1) == 1


def test_truncation_tracking():
    a = QSeries.from_coefficients(0, [1, 1, 1], order=3)
    b = QSeries.from_coefficients(1, [1, 1], order=3)
    prod = a * b
    # precision is min(order_a + val_b, order_b + val_a) = min(4, 3)
    assert prod.order == 3
    with pytest.raises(TruncationError):
        prod.coefficient(3)
    with pytest.raises(TruncationError):
        a.truncate(5)


def test_inverse():
    s = QSeries.from_coefficients(0, [1, -1], order=10)
    assert s.inverse().coefficients() == [1] * 10


def test_first_difference():
    a = QSeries.from_coefficients(0, [1, 2, 3], order=3)
    b = QSeries.from_coefficients(0, [1, 2, 4], order=3)
    assert first_difference(a, a) is None
    assert first_difference(a, b) == (2, 3, 4)


def test_e8_gram_unimodular():
    import numpy as np

    g = e8_gram()
    assert round(np.linalg.det(g)) == 1
    assert all(g[i, i] == 2 for i in range(8))


def test_theta_e8_small():
    assert theta_e8(3).coefficients() == [1, 240, 2160]


def test_theta_e8_enumeration_matches_sigma3():
    assert theta_e8(12, "enumerate") == theta_e8(12, "sigma3")


def test_theta_dual_small_lattice():
    # Z^2 with the identity form: r_2(n) known values
    counts = lattice_norm_counts([[1, 0], [0, 1]], 10)
    assert counts.tolist() == [1, 4, 4, 0, 4, 8, 0, 0, 4, 4, 8]


def test_sigma3():
    assert [sigma3(n) for n in range(1, 6)] == [1, 9, 28, 73, 126]


def test_theta_sqrt2_e8():
    t = theta_sqrt2_e8(8)
    assert t.coefficients(1, 0) == [1, 0, 240, 0, 2160, 0, 6720, 0]


series_st = st.builds(
    lambda off, cs: QSeries.from_coefficients(Fraction(off, 2), cs, Fraction(1, 2), order=6),
    st.integers(-2, 4),
    st.lists(st.integers(-5, 5), max_size=8),
)


@settings(max_examples=60)
@given(series_st, series_st, series_st)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QSeries.zero(a.order)


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_monomial_product(i, j):
    x, y = Fraction(i, 3), Fraction(j, 4)
    assert QSeries.monomial(x) * QSeries.monomial(y) == QSeries.monomial(x + y)
