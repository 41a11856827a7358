"""Return-series ingestion and pairwise alignment.

CSV schema: header ``date,return`` (or ``date,price`` with from_prices=True),
UTF-8, LF or CRLF. Dates are ISO-8601 and must be strictly increasing; any
malformed or missing cell fails the load with its line (and column) cited.
Losses are negated returns throughout the package.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date as _date
from pathlib import Path

import numpy as np

from .exceptions import DataValidationError
from .sample import BivariateSample


@dataclass(frozen=True)
class ReturnSeries:
    symbol: str
    dates: tuple
    returns: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.returns, dtype=float)
        object.__setattr__(self, "returns", r)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != r.shape[0]:
            raise DataValidationError("dates and returns must have equal length")
        if not np.isfinite(r).all():
            raise DataValidationError("returns contain non-finite entries")
        r.setflags(write=False)

    @property
    def losses(self) -> np.ndarray:
        return -self.returns

    @property
    def n(self) -> int:
        return self.returns.shape[0]


def _parse_iso_date(text: str, line: int) -> _date:
    try:
        return _date.fromisoformat(text.strip())
    except ValueError as exc:
        raise DataValidationError(f"line {line}: bad date {text!r} ({exc})") from exc


def _parse_number(text: str, line: int, column: str) -> float:
    t = text.strip()
    if not t:
        raise DataValidationError(f"line {line}, column {column!r}: missing value")
    try:
        v = float(t)
    except ValueError as exc:
        raise DataValidationError(
            f"line {line}, column {column!r}: malformed number {text!r}"
        ) from exc
    if not np.isfinite(v):
        raise DataValidationError(
            f"line {line}, column {column!r}: non-finite value {text!r}"
        )
    return v


def load_returns_csv(path, from_prices: bool = False, symbol: str | None = None) -> ReturnSeries:
    """Load one return series.

    Expects a ``date`` column plus a ``return`` column (or ``price`` when
    ``from_prices`` is set, converted to simple returns p_t/p_{t-1} - 1).
    """
    path = Path(path)
    value_col = "price" if from_prices else "return"
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataValidationError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataValidationError(f"{path}: empty file") from None
        cols = [c.strip().lower() for c in header]
        if "date" not in cols or value_col not in cols:
            raise DataValidationError(
                f"{path}: header must contain 'date' and {value_col!r}, got {header}"
            )
        di, vi = cols.index("date"), cols.index(value_col)
        dates: list[_date] = []
        values: list[float] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) <= max(di, vi):
                raise DataValidationError(f"line {line_no}: expected {len(cols)} columns, got {len(row)}")
            d = _parse_iso_date(row[di], line_no)
            if dates and d <= dates[-1]:
                raise DataValidationError(
                    f"line {line_no}: dates not strictly increasing ({dates[-1]} -> {d})"
                )
            dates.append(d)
            values.append(_parse_number(row[vi], line_no, value_col))
    if from_prices:
        if len(values) < 2:
            raise DataValidationError(f"{path}: need at least 2 prices to form returns")
        prices = np.asarray(values)
        if (prices <= 0).any():
            raise DataValidationError(f"{path}: nonpositive price")
        returns = prices[1:] / prices[:-1] - 1.0
        dates = dates[1:]
    else:
        returns = np.asarray(values)
    return ReturnSeries(
        symbol=symbol if symbol is not None else path.stem,
        dates=tuple(d.isoformat() for d in dates),
        returns=returns,
    )


def align_pair(a: ReturnSeries, b: ReturnSeries, min_overlap: int = 100) -> BivariateSample:
    """Inner-join two series on dates (chronological order preserved) and
    pair their losses."""
    b_index = {d: i for i, d in enumerate(b.dates)}
    ia = [i for i, d in enumerate(a.dates) if d in b_index]
    if len(ia) < min_overlap:
        raise DataValidationError(
            f"only {len(ia)} shared dates between {a.symbol} and {b.symbol}; "
            f"need at least {min_overlap}"
        )
    ib = [b_index[a.dates[i]] for i in ia]
    return BivariateSample(xs=a.losses[ia], ys=b.losses[ib])
