"""Dataset parsing, serialization, and cell editing."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from prefigure import (
    DEFAULT_CATEGORY,
    ItemRecord,
    RankingDataset,
    edit_cell,
    parse_dataset,
    serialize_dataset,
)
from prefigure.dataset import (
    DuplicateItem,
    DuplicatePeriod,
    EmptyDataset,
    InvalidHeader,
    NegativeValue,
    NonNumericValue,
    RaggedRow,
    TooFewPeriods,
    UnknownItem,
    UnknownPeriod,
)


def test_parse_basic(sample_csv):
    ds = parse_dataset(sample_csv)
    assert ds.item_ids == ("alpha", "bravo", "charlie", "delta", "echo")
    assert ds.periods == ("2018", "2019", "2020")
    assert ds.value("alpha", "2018") == 10.0
    assert ds.value("delta", "2020") == 60.0
    assert ds.categories[0] == "tech"
    assert ds.column(1) == (30.0, 35.0, 28.0, 12.0, 20.0)


def test_parse_tolerates_trailing_blank_lines(sample_csv):
    assert parse_dataset(sample_csv + "\n\n") == parse_dataset(sample_csv)


def test_parse_strips_cell_whitespace():
    ds = parse_dataset("item,category,p0,p1\n a , tech , 1 , 2 \n")
    assert ds.item_ids == ("a",)
    assert ds.values == ((1.0, 2.0),)


def test_empty_category_gets_default():
    ds = parse_dataset("item,category,p0,p1\na,,1,2\n")
    assert ds.categories == (DEFAULT_CATEGORY,)


@pytest.mark.parametrize(
    "text,exc",
    [
        ("", InvalidHeader),
        ("name,category,p0,p1\na,c,1,2\n", InvalidHeader),
        ("item,cat,p0,p1\na,c,1,2\n", InvalidHeader),
        ("item,category,p0\na,c,1\n", TooFewPeriods),
        ("item,category\na,c\n", TooFewPeriods),
        ("item,category,p0,p0\na,c,1,2\n", DuplicatePeriod),
        ("item,category,p0,p1\n", EmptyDataset),
        ("item,category,p0,p1\na,c,1,2\na,d,3,4\n", DuplicateItem),
        ("item,category,p0,p1\na,c,1\n", RaggedRow),
        ("item,category,p0,p1\na,c,1,2,3\n", RaggedRow),
        ("item,category,p0,p1\na,c,1,x\n", NonNumericValue),
        ("item,category,p0,p1\na,c,1,nan\n", NonNumericValue),
        ("item,category,p0,p1\na,c,1,inf\n", NonNumericValue),
        ("item,category,p0,p1\na,c,1,-2\n", NegativeValue),
    ],
)
def test_parse_rejects_malformed(text, exc):
    with pytest.raises(exc):
        parse_dataset(text)


def test_error_coordinates_are_one_based():
    # header is row 1; first value column is col 3
    with pytest.raises(NonNumericValue) as e:
        parse_dataset("item,category,p0,p1\na,c,1,2\nb,c,bad,4\n")
    assert e.value.row == 3
    assert e.value.col == 3
    with pytest.raises(NegativeValue) as e:
        parse_dataset("item,category,p0,p1\na,c,1,-5\n")
    assert e.value.row == 2
    assert e.value.col == 4


def test_error_codes_are_stable():
    with pytest.raises(DuplicateItem) as e:
        parse_dataset("item,category,p0,p1\na,c,1,2\na,d,3,4\n")
    assert e.value.code == "DuplicateItem"
    assert e.value.item_id == "a"


def test_serialize_round_trip(sample_dataset):
    assert parse_dataset(serialize_dataset(sample_dataset)) == sample_dataset


def test_serialize_quotes_commas():
    ds = RankingDataset(
        items=(ItemRecord(id="a,b", category="x,y"),),
        periods=("p0", "p1"),
        values=((1.5, 2.5),),
    )
    assert parse_dataset(serialize_dataset(ds)) == ds


_ids = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd")), min_size=1, max_size=8
)


@given(
    ids=st.lists(_ids, min_size=1, max_size=8, unique=True),
    periods=st.lists(_ids, min_size=2, max_size=6, unique=True),
    data=st.data(),
)
def test_round_trip_property(ids, periods, data):
    """serialize -> parse recovers every id, period, and exact float value."""
    value = st.floats(min_value=0, max_value=1e12, allow_nan=False, allow_infinity=False)
    ds = RankingDataset(
        items=tuple(ItemRecord(id=i, category="c") for i in ids),
        periods=tuple(periods),
        values=tuple(
            tuple(data.draw(value) for _ in periods) for _ in ids
        ),
    )
    assert parse_dataset(serialize_dataset(ds)) == ds


def test_edit_cell(sample_dataset):
    edited = edit_cell(sample_dataset, "bravo", "2019", 99.0)
    assert edited.value("bravo", "2019") == 99.0
    assert sample_dataset.value("bravo", "2019") == 35.0  # original untouched
    # every other cell identical
    for item in sample_dataset.item_ids:
        for period in sample_dataset.periods:
            if (item, period) != ("bravo", "2019"):
                assert edited.value(item, period) == sample_dataset.value(item, period)


def test_edit_cell_rejects_bad_input(sample_dataset):
    with pytest.raises(UnknownItem):
        edit_cell(sample_dataset, "nope", "2019", 1.0)
    with pytest.raises(UnknownPeriod):
        edit_cell(sample_dataset, "alpha", "1999", 1.0)
    with pytest.raises(NegativeValue):
        edit_cell(sample_dataset, "alpha", "2019", -1.0)
    with pytest.raises(NonNumericValue):
        edit_cell(sample_dataset, "alpha", "2019", float("nan"))
