"""Loading, validating and pairwise aligning dated closing-price series.

Windows are carved from the union calendar of every ticker's trading days.
Each ticker contributes the observations that fall inside a window's date
range, and two tickers are compared only on the days they have in common.
"""
from __future__ import annotations

import csv
import datetime as dt
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_COVERAGE = 0.8


class DataError(Exception):
    """Fatal problem with the input data (unreadable file, ambiguous rows)."""


@dataclass(frozen=True)
class RowDiagnostic:
    source: str
    line: int
    message: str

    def __str__(self) -> str:
        return f"{self.source}:{self.line}: {self.message}"


@dataclass(frozen=True)
class PriceSeries:
    """Closing prices of one ticker, ordered by date.

    ``dates`` is a ``datetime64[D]`` array, strictly increasing; ``closes``
    holds the matching strictly positive prices.
    """

    ticker: str
    dates: np.ndarray
    closes: np.ndarray

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        closes = np.asarray(self.closes, dtype=float)
        if dates.shape != closes.shape or dates.ndim != 1:
            raise ValueError(f"{self.ticker}: dates and closes must be 1-d and equal length")
        if dates.size > 1 and not np.all(dates[1:] > dates[:-1]):
            raise ValueError(f"{self.ticker}: dates must be strictly increasing")
        if not np.all(closes > 0):
            raise ValueError(f"{self.ticker}: closes must be positive")
        dates.flags.writeable = False
        closes.flags.writeable = False
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "closes", closes)

    def __len__(self) -> int:
        return self.dates.size

    def between(self, start, stop) -> "PriceSeries":
        """Observations with ``start <= date <= stop``."""
        lo = np.searchsorted(self.dates, np.datetime64(start, "D"), side="left")
        hi = np.searchsorted(self.dates, np.datetime64(stop, "D"), side="right")
        return PriceSeries(self.ticker, self.dates[lo:hi], self.closes[lo:hi])


@dataclass(frozen=True)
class WindowSpec:
    length: int
    shift: int
    index: int
    start: int
    dates: np.ndarray = field(repr=False)

    @property
    def center_date(self) -> np.datetime64:
        return self.dates[self.length // 2]

    @property
    def first_date(self) -> np.datetime64:
        return self.dates[0]

    @property
    def last_date(self) -> np.datetime64:
        return self.dates[-1]


@dataclass(frozen=True)
class AlignedPair:
    ticker_a: str
    ticker_b: str
    dates: np.ndarray
    closes_a: np.ndarray
    closes_b: np.ndarray
    coverage: float

    def __len__(self) -> int:
        return self.dates.size


def _parse_close(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"non-positive or non-finite close {text!r}")
    return value


def _build_series(rows: dict[str, dict[dt.date, float]]) -> dict[str, PriceSeries]:
    out = {}
    for ticker in sorted(rows):
        obs = sorted(rows[ticker].items())
        dates = np.array([d for d, _ in obs], dtype="datetime64[D]")
        closes = np.array([c for _, c in obs], dtype=float)
        out[ticker] = PriceSeries(ticker, dates, closes)
    return out


def _read_rows(path: Path, rows, diagnostics, ticker=None):
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with handle:
        reader = csv.DictReader(handle)
        needed = {"date", "close"} if ticker else {"date", "ticker", "close"}
        if reader.fieldnames is None or not needed <= {f.strip() for f in reader.fieldnames}:
            raise DataError(f"{path}: header must contain {sorted(needed)}")
        for lineno, raw in enumerate(reader, start=2):
            row = {k.strip(): (v or "").strip() for k, v in raw.items() if k is not None}
            name = ticker or row.get("ticker", "")
            try:
                if not name:
                    raise ValueError("empty ticker")
                day = dt.date.fromisoformat(row["date"])
                close = _parse_close(row["close"])
            except (ValueError, KeyError) as exc:
                diagnostics.append(RowDiagnostic(str(path), lineno, str(exc)))
                continue
            series = rows.setdefault(name, {})
            if day in series:
                raise DataError(f"{path}:{lineno}: duplicate row for ({name}, {day})")
            series[day] = close


def load_price_csv(path) -> tuple[dict[str, PriceSeries], list[RowDiagnostic]]:
    """Read a long-format ``date,ticker,close`` file, or a directory of
    ``<TICKER>.csv`` files with a ``date,close`` header.

    Returns the series keyed by ticker (sorted alphabetically) and the list of
    rejected rows. Duplicate ``(ticker, date)`` rows raise ``DataError``.
    """
    path = Path(path)
    rows: dict[str, dict[dt.date, float]] = {}
    diagnostics: list[RowDiagnostic] = []
    if path.is_dir():
        files = sorted(path.glob("*.csv"))
        if not files:
            raise DataError(f"{path}: no .csv files found")
        for f in files:
            _read_rows(f, rows, diagnostics, ticker=f.stem)
    else:
        _read_rows(path, rows, diagnostics)
    for d in diagnostics:
        logger.warning("skipped row %s", d)
    return _build_series(rows), diagnostics


def union_calendar(series: Iterable[PriceSeries]) -> np.ndarray:
    """Sorted union of every series' trading days."""
    parts = [s.dates for s in series]
    if not parts:
        return np.array([], dtype="datetime64[D]")
    return np.unique(np.concatenate(parts))


def enumerate_windows(global_dates: Sequence, length: int = 500, shift: int = 25) -> list[WindowSpec]:
    """Windows of ``length`` trading days starting every ``shift`` days.

    Returns an empty list (with a warning) when the calendar is shorter than
    one window.
    """
    if length < 1 or shift < 1:
        raise ValueError("window length and shift must be positive")
    if shift > length:
        raise ValueError("shift must not exceed window length")
    dates = np.asarray(global_dates, dtype="datetime64[D]")
    if dates.size < length:
        logger.warning("calendar has %d days, fewer than one window of %d", dates.size, length)
        return []
    starts = range(0, dates.size - length + 1, shift)
    return [
        WindowSpec(length, shift, w, s, dates[s : s + length])
        for w, s in enumerate(starts)
    ]


def window_slice(series: PriceSeries, window: WindowSpec) -> PriceSeries:
    return series.between(window.first_date, window.last_date)


def align_pair(a: PriceSeries, b: PriceSeries, length: int,
               min_coverage: float = DEFAULT_COVERAGE) -> AlignedPair | None:
    """Restrict two window slices to their common days.

    Returns ``None`` when the common days cover less than ``min_coverage``
    of the window length.
    """
    common, ia, ib = np.intersect1d(a.dates, b.dates, assume_unique=True, return_indices=True)
    coverage = common.size / length
    if coverage < min_coverage:
        return None
    return AlignedPair(a.ticker, b.ticker, common, a.closes[ia], b.closes[ib], coverage)


def presence_matrix(slices: Sequence[PriceSeries], window: WindowSpec):
    """Place each slice on the window calendar.

    Returns ``(mask, values)`` of shape ``(n_series, window.length)``; ``mask``
    marks the days a series trades, ``values`` holds its closes (NaN elsewhere).
    """
    n = len(slices)
    mask = np.zeros((n, window.length), dtype=bool)
    values = np.full((n, window.length), np.nan)
    for i, s in enumerate(slices):
        pos = np.searchsorted(window.dates, s.dates)
        ok = (pos < window.length)
        ok[ok] &= window.dates[pos[ok]] == s.dates[ok]
        mask[i, pos[ok]] = True
        values[i, pos[ok]] = s.closes[ok]
    return mask, values
