"""Temporal ranking data: one row per item, one column per period.

The CSV layout is `item,category,<period-1>,<period-2>,...` (RFC 4180,
UTF-8). Values are non-negative metrics; ranks are derived elsewhere by
descending value. Datasets are immutable; edits return new instances.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

__all__ = [
    "DatasetError",
    "DuplicateItem",
    "DuplicatePeriod",
    "EmptyDataset",
    "InvalidHeader",
    "ItemRecord",
    "NegativeValue",
    "NonNumericValue",
    "RaggedRow",
    "RankingDataset",
    "TooFewPeriods",
    "UnknownItem",
    "UnknownPeriod",
    "edit_cell",
    "parse_dataset",
    "serialize_dataset",
]

DEFAULT_CATEGORY = "uncategorized"


class DatasetError(ValueError):
    """Base for dataset ingestion and editing failures.

    `code` is a stable machine-readable identifier; row/col attributes,
    where present, are 1-based CSV coordinates (header row is row 1).
    """

    code = "DatasetError"


class InvalidHeader(DatasetError):
    code = "InvalidHeader"


class TooFewPeriods(DatasetError):
    code = "TooFewPeriods"


class EmptyDataset(DatasetError):
    code = "EmptyDataset"


class DuplicateItem(DatasetError):
    code = "DuplicateItem"

    def __init__(self, item_id: str):
        self.item_id = item_id
        super().__init__(f"duplicate item id: {item_id!r}")


class DuplicatePeriod(DatasetError):
    code = "DuplicatePeriod"

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"duplicate period label: {label!r}")


class RaggedRow(DatasetError):
    code = "RaggedRow"

    def __init__(self, row: int, expected: int, got: int):
        self.row = row
        super().__init__(f"row {row}: expected {expected} cells, got {got}")


class NonNumericValue(DatasetError):
    code = "NonNumericValue"

    def __init__(self, row: int, col: int, text: str):
        self.row = row
        self.col = col
        super().__init__(f"row {row}, col {col}: not a finite number: {text!r}")


class NegativeValue(DatasetError):
    code = "NegativeValue"

    def __init__(self, row: int, col: int, value: float):
        self.row = row
        self.col = col
        super().__init__(f"row {row}, col {col}: negative value {value}")


class UnknownItem(DatasetError):
    code = "UnknownItem"

    def __init__(self, item_id: str):
        self.item_id = item_id
        super().__init__(f"unknown item: {item_id!r}")


class UnknownPeriod(DatasetError):
    code = "UnknownPeriod"

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unknown period: {label!r}")


@dataclass(frozen=True)
class ItemRecord:
    """A ranking item: unique id plus the category that keys its color."""

    id: str
    category: str = DEFAULT_CATEGORY


@dataclass(frozen=True)
class RankingDataset:
    """Rectangular items x periods matrix of non-negative metric values.

    Row order and column order are preserved from the source file.
    """

    items: tuple[ItemRecord, ...]
    periods: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    @property
    def item_ids(self) -> tuple[str, ...]:
        return tuple(item.id for item in self.items)

    @property
    def categories(self) -> tuple[str, ...]:
        return tuple(item.category for item in self.items)

    def item_index(self, item_id: str) -> int:
        for i, item in enumerate(self.items):
            if item.id == item_id:
                return i
        raise UnknownItem(item_id)

    def period_index(self, label: str) -> int:
        try:
            return self.periods.index(label)
        except ValueError:
            raise UnknownPeriod(label) from None

    def value(self, item_id: str, period_label: str) -> float:
        return self.values[self.item_index(item_id)][self.period_index(period_label)]

    def column(self, period: int) -> tuple[float, ...]:
        """Values of every item at one period, in item order."""
        return tuple(row[period] for row in self.values)


def _parse_value(text: str, row: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NonNumericValue(row, col, text) from None
    if not math.isfinite(value):
        raise NonNumericValue(row, col, text)
    if value < 0:
        raise NegativeValue(row, col, value)
    return value


def parse_dataset(raw_table: str) -> RankingDataset:
    """Parse CSV text into a validated RankingDataset.

    Raises a DatasetError subclass on any malformed input; nothing is
    imputed, missing or non-numeric cells are rejected outright.
    """
    rows = list(csv.reader(io.StringIO(raw_table)))
    rows = [row for row in rows if row]  # tolerate trailing blank lines
    if not rows:
        raise InvalidHeader("empty input")

    header = [cell.strip() for cell in rows[0]]
    if len(header) < 2 or header[0] != "item" or header[1] != "category":
        raise InvalidHeader(
            "header must start with 'item,category', got: " + ",".join(header[:2])
        )
    periods = tuple(header[2:])
    if len(periods) < 2:
        raise TooFewPeriods(f"need at least 2 period columns, got {len(periods)}")
    seen_periods = set()
    for label in periods:
        if label in seen_periods:
            raise DuplicatePeriod(label)
        seen_periods.add(label)

    if len(rows) < 2:
        raise EmptyDataset("need at least 1 data row")

    items: list[ItemRecord] = []
    values: list[tuple[float, ...]] = []
    seen_items: set[str] = set()
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise RaggedRow(r, len(header), len(row))
        item_id = row[0].strip()
        if not item_id:
            raise InvalidHeader(f"row {r}: empty item id")
        if item_id in seen_items:
            raise DuplicateItem(item_id)
        seen_items.add(item_id)
        category = row[1].strip() or DEFAULT_CATEGORY
        items.append(ItemRecord(id=item_id, category=category))
        values.append(
            tuple(_parse_value(cell.strip(), r, c) for c, cell in enumerate(row[2:], start=3))
        )

    return RankingDataset(items=tuple(items), periods=periods, values=tuple(values))


def serialize_dataset(dataset: RankingDataset) -> str:
    """Inverse of parse_dataset; row and column order are kept verbatim."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["item", "category", *dataset.periods])
    for item, row in zip(dataset.items, dataset.values):
        writer.writerow([item.id, item.category, *(repr(v) for v in row)])
    return buf.getvalue()


def edit_cell(
    dataset: RankingDataset, item_id: str, period_label: str, new_value: float
) -> RankingDataset:
    """Return a copy of the dataset with exactly one cell replaced."""
    i = dataset.item_index(item_id)
    p = dataset.period_index(period_label)
    value = float(new_value)
    if not math.isfinite(value):
        raise NonNumericValue(i + 2, p + 3, repr(new_value))
    if value < 0:
        raise NegativeValue(i + 2, p + 3, value)
    row = dataset.values[i][:p] + (value,) + dataset.values[i][p + 1 :]
    return RankingDataset(
        items=dataset.items,
        periods=dataset.periods,
        values=dataset.values[:i] + (row,) + dataset.values[i + 1 :],
    )
