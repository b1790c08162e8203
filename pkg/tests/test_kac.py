from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cosetfusion.kac import (
    MinimalModel,
    PrimaryField,
    central_charge,
    conformal_weight,
    enumerate_primaries,
    format_fraction,
    kac_weight,
    parse_fraction,
)


@pytest.mark.parametrize("m, c", [(1, Fraction(1, 2)), (9, Fraction(21, 22)), (2, Fraction(7, 10))])
def test_central_charge(m, c):
    assert central_charge(MinimalModel(m)) == c


@pytest.mark.parametrize(
    "m, r, s, h",
    [
        (9, 1, 7, Fraction(8)),
        (9, 1, 1, Fraction(0)),
        (4, 1, 1, Fraction(0)),
        (1, 2, 2, Fraction(1, 16)),
        (1, 1, 3, Fraction(1, 2)),
    ],
)
def test_conformal_weight(m, r, s, h):
    assert conformal_weight(PrimaryField.make(MinimalModel(m), r, s)) == h


def test_canonical_form_is_lexicographic_minimum():
    ising = MinimalModel(1)
    assert PrimaryField.make(ising, 2, 2) == PrimaryField(ising, 1, 2)
    assert PrimaryField.make(ising, 2, 1) == PrimaryField(ising, 1, 3)
    with pytest.raises(ValueError):
        PrimaryField(ising, 2, 2)


@pytest.mark.parametrize("r, s", [(0, 1), (3, 1), (1, 4), (1, 0)])
def test_out_of_range_labels_rejected(r, s):
    with pytest.raises(ValueError):
        PrimaryField.make(MinimalModel(1), r, s)


def test_invalid_model():
    with pytest.raises(ValueError):
        MinimalModel(0)


@pytest.mark.parametrize("m, count", [(1, 3), (2, 6), (9, 55)])
def test_enumerate_counts(m, count):
    assert len(enumerate_primaries(MinimalModel(m))) == count


def test_ising_weights():
    hs = [f.h for f in enumerate_primaries(MinimalModel(1))]
    assert hs == [Fraction(0), Fraction(1, 16), Fraction(1, 2)]


@pytest.mark.parametrize("m", range(1, 31))
def test_enumeration_invariants(m):
    model = MinimalModel(m)
    fields = enumerate_primaries(model)
    assert len(fields) == (model.p - 1) * (model.q - 1) // 2
    assert len({(f.r, f.s) for f in fields}) == len(fields)
    assert [f for f in fields if f.h == 0] == [model.field(1, 1)]
    assert all(f.h > 0 for f in fields if (f.r, f.s) != (1, 1))
    assert fields == sorted(fields, key=lambda f: (f.h, f.r, f.s))
    assert 0 < model.c < 1


@given(st.integers(1, 30), st.data())
def test_kac_symmetry(m, data):
    model = MinimalModel(m)
    r = data.draw(st.integers(1, model.p - 1))
    s = data.draw(st.integers(1, model.q - 1))
    assert kac_weight(model, r, s) == kac_weight(model, model.p - r, model.q - s)
    f = PrimaryField.make(model, r, s)
    assert PrimaryField.make(model, f.r, f.s) == f


def test_serialization_round_trip():
    f = MinimalModel(9).field(1, 7)
    assert str(f) == "9:1.7"
    assert PrimaryField.parse("9:1.7") == f
    assert PrimaryField.parse("1.7", MinimalModel(9)) == f
    # non-canonical input is canonicalised
    assert str(PrimaryField.parse("1:2.2")) == "1:1.2"
    with pytest.raises(ValueError):
        PrimaryField.parse("1.7")
    with pytest.raises(ValueError):
        PrimaryField.parse("9:17")


def test_fraction_format():
    assert format_fraction(Fraction(8)) == "8/1"
    assert format_fraction(Fraction(6, 4)) == "3/2"
    assert parse_fraction(" 21/22 ") == Fraction(21, 22)
    with pytest.raises(ValueError):
        parse_fraction("1/0")
