"""Monthly time-series data model, CSV ingestion, and basic transforms.

Everything downstream (regressions, unit-root tests, the state-space fit)
consumes the immutable containers defined here. Dates are plain
(year, month) pairs; the only calendar arithmetic is month stepping.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DuplicateDate,
    GapInDates,
    MissingValue,
    NonPositiveLevel,
    OutOfRange,
    TooShort,
)

_MONTH_RE = re.compile(r"^(\d{4})[-:M](\d{1,2})$")


@dataclass(frozen=True, order=True)
class MonthDate:
    """A calendar month, totally ordered by 12*year + month."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @property
    def index(self) -> int:
        return 12 * self.year + (self.month - 1)

    def plus(self, months: int) -> "MonthDate":
        idx = self.index + months
        return MonthDate(idx // 12, idx % 12 + 1)

    def months_until(self, other: "MonthDate") -> int:
        return other.index - self.index

    @classmethod
    def parse(cls, text: str) -> "MonthDate":
        """Parse 'YYYY-MM', 'YYYY:M' or 'YYYYMmm' forms."""
        m = _MONTH_RE.match(text.strip())
        if not m:
            raise ValueError(f"unparseable month {text!r}; expected YYYY-MM")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


@dataclass(frozen=True)
class MonthlySeries:
    """Gap-free monthly observations; values[i] belongs to start + i months."""

    start: MonthDate
    values: tuple[float, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("series must be non-empty")
        vals = tuple(float(v) for v in self.values)
        for v in vals:
            if not math.isfinite(v):
                raise ValueError(f"series {self.name!r} contains non-finite value {v}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> MonthDate:
        return self.start.plus(len(self.values) - 1)

    def date_at(self, i: int) -> MonthDate:
        return self.start.plus(i)

    def dates(self) -> list[MonthDate]:
        return [self.start.plus(i) for i in range(len(self.values))]

    def index_of(self, date: MonthDate) -> int:
        i = self.start.months_until(date)
        if not 0 <= i < len(self.values):
            raise OutOfRange(f"{date} outside series span {self.start}..{self.end}")
        return i


@dataclass(frozen=True)
class Dataset:
    """Aligned price-index and money-stock level series."""

    y_raw: MonthlySeries
    x_raw: MonthlySeries

    def __post_init__(self):
        if self.y_raw.start != self.x_raw.start or len(self.y_raw) != len(self.x_raw):
            raise ValueError("y_raw and x_raw must share start and length")
        for s in (self.y_raw, self.x_raw):
            for i, v in enumerate(s.values):
                if v <= 0:
                    raise NonPositiveLevel(
                        f"{s.name or 'level'} at {s.date_at(i)} is {v}; "
                        "levels must be strictly positive"
                    )

    def __len__(self) -> int:
        return len(self.y_raw)

    @property
    def start(self) -> MonthDate:
        return self.y_raw.start

    @property
    def end(self) -> MonthDate:
        return self.y_raw.end


@dataclass(frozen=True)
class DecadeAverage:
    label: str
    first: MonthDate
    last: MonthDate
    mean: float


@dataclass(frozen=True)
class CsvSchema:
    """Column mapping for CSV ingestion.

    When y/x are None the first and second non-date columns are used, in
    header order.
    """

    date: str = "date"
    y: str | None = None
    x: str | None = None


def parse_csv(source, schema: CsvSchema = CsvSchema()) -> Dataset:
    """Parse a header-ed CSV of monthly levels into an aligned Dataset.

    `source` may be a path, a text/byte stream, or a CSV string. Rows are
    sorted ascending by date before validation; months must then be
    consecutive, unique, and every level strictly positive.
    """
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingValue("empty CSV: no header row") from None
    header = [h.strip() for h in header]

    try:
        date_idx = _find_column(header, schema.date)
    except KeyError:
        raise MissingValue(f"no {schema.date!r} column in header {header}") from None
    value_cols = [i for i in range(len(header)) if i != date_idx]
    if len(value_cols) < 2:
        raise MissingValue("need at least two numeric columns besides the date")
    y_idx = _find_column(header, schema.y) if schema.y else value_cols[0]
    x_idx = _find_column(header, schema.x) if schema.x else value_cols[1]

    rows: list[tuple[MonthDate, float, float]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(date_idx, y_idx, x_idx):
            raise MissingValue(f"row {lineno}: too few cells")
        try:
            date = MonthDate.parse(row[date_idx])
        except ValueError as exc:
            raise MissingValue(f"row {lineno}: {exc}") from None
        rows.append((date, _cell(row[y_idx], lineno, header[y_idx]),
                     _cell(row[x_idx], lineno, header[x_idx])))
    if not rows:
        raise MissingValue("CSV has no data rows")

    rows.sort(key=lambda r: r[0])
    for (d1, _, _), (d2, _, _) in zip(rows, rows[1:]):
        step = d1.months_until(d2)
        if step == 0:
            raise DuplicateDate(f"{d2} appears more than once")
        if step != 1:
            raise GapInDates(f"gap between {d1} and {d2}")

    start = rows[0][0]
    y = MonthlySeries(start, tuple(r[1] for r in rows), name=header[y_idx])
    x = MonthlySeries(start, tuple(r[2] for r in rows), name=header[x_idx])
    return Dataset(y_raw=y, x_raw=x)


def write_csv(dataset: Dataset) -> str:
    """Serialize a Dataset back to the input CSV schema (round-trippable)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["date", dataset.y_raw.name or "y", dataset.x_raw.name or "x"])
    for i in range(len(dataset)):
        writer.writerow([
            str(dataset.start.plus(i)),
            repr(dataset.y_raw.values[i]),
            repr(dataset.x_raw.values[i]),
        ])
    return buf.getvalue()


def yoy_growth(s: MonthlySeries, mode: str = "log-diff") -> MonthlySeries:
    """Twelve-month growth rate in percent.

    mode 'log-diff' gives 100*(ln s_t - ln s_{t-12}); 'pct-change' gives
    100*(s_t/s_{t-12} - 1). Output starts twelve months after the input.
    """
    if mode not in ("log-diff", "pct-change"):
        raise ValueError(f"unknown growth mode {mode!r}")
    if len(s) < 13:
        raise TooShort(f"need at least 13 observations for 12-month growth, got {len(s)}")
    vals = s.values
    for i, v in enumerate(vals):
        if v <= 0:
            raise NonPositiveLevel(f"{s.name or 'series'} at {s.date_at(i)} is {v}")
    if mode == "log-diff":
        out = tuple(100.0 * (math.log(vals[i]) - math.log(vals[i - 12]))
                    for i in range(12, len(vals)))
    else:
        out = tuple(100.0 * (vals[i] / vals[i - 12] - 1.0)
                    for i in range(12, len(vals)))
    suffix = "_yoy" if mode == "log-diff" else "_yoy_pct"
    return MonthlySeries(s.start.plus(12), out, name=s.name + suffix)


def demean(s: MonthlySeries) -> tuple[MonthlySeries, float]:
    """Subtract the sample mean; returns (centered series, mean).

    A mean below one ulp of the data scale is indistinguishable from zero,
    so it is treated as zero; this makes centering exactly idempotent.
    """
    mean = math.fsum(s.values) / len(s)
    scale = max(abs(v) for v in s.values)
    if abs(mean) <= 2.0 ** -52 * scale:
        return s, 0.0
    centered = tuple(v - mean for v in s.values)
    return MonthlySeries(s.start, centered, name=s.name), mean


def window(s: MonthlySeries, first: MonthDate, last: MonthDate) -> MonthlySeries:
    """Inclusive date slice; both endpoints must lie within the span."""
    if first > last:
        raise OutOfRange(f"window start {first} is after end {last}")
    i = s.index_of(first)
    j = s.index_of(last)
    return MonthlySeries(first, s.values[i:j + 1], name=s.name)


def decade_averages(s: MonthlySeries) -> list[DecadeAverage]:
    """Arithmetic mean per calendar decade (1970-1979, ...) over the span.

    Partial decades are averaged over the months actually present and carry
    their true first/last dates.
    """
    out: list[DecadeAverage] = []
    by_decade: dict[int, list[int]] = {}
    for i in range(len(s)):
        by_decade.setdefault(s.date_at(i).year // 10 * 10, []).append(i)
    for decade in sorted(by_decade):
        idx = by_decade[decade]
        mean = math.fsum(s.values[i] for i in idx) / len(idx)
        out.append(DecadeAverage(
            label=f"{decade}s",
            first=s.date_at(idx[0]),
            last=s.date_at(idx[-1]),
            mean=mean,
        ))
    return out


def _read_text(source) -> str:
    # utf-8-sig strips the BOM Excel likes to prepend
    if isinstance(source, bytes):
        return source.decode("utf-8-sig")
    if isinstance(source, str):
        # a path unless it contains a newline (then treat as CSV content)
        if "\n" in source:
            return source.lstrip("﻿")
        with open(source, "r", encoding="utf-8-sig") as fh:
            return fh.read()
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8-sig")
    return data.lstrip("﻿")


def _find_column(header: Sequence[str], name: str) -> int:
    lowered = [h.lower() for h in header]
    if name.lower() not in lowered:
        raise KeyError(name)
    return lowered.index(name.lower())


def _cell(raw: str, lineno: int, col: str) -> float:
    text = raw.strip()
    if not text:
        raise MissingValue(f"row {lineno}: empty cell in column {col!r}")
    try:
        return float(text)
    except ValueError:
        raise MissingValue(f"row {lineno}: non-numeric cell {raw!r} in column {col!r}") from None
