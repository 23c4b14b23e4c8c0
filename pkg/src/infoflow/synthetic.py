"""Synthetic price panels with known coupling, for tests and demos."""
from __future__ import annotations

import numpy as np

from .market_data import PriceSeries


def business_days(n: int, start: str = "2000-01-03") -> np.ndarray:
    return np.busday_offset(np.datetime64(start, "D"), np.arange(n), roll="forward")


def lagged_pair(n: int, rng: np.random.Generator, lag: int = 2, strength: float = 0.8,
                noise: float = 1.0):
    """Driver ``y`` (i.i.d. normal) and target ``x[t] = strength*y[t-lag] + noise*eps``."""
    y = rng.standard_normal(n + lag)
    x = strength * y[:-lag] + noise * rng.standard_normal(n)
    return x, y[lag:]


def to_prices(signal, scale: float = 0.01, kind: str = "returns", start: float = 100.0) -> np.ndarray:
    """Turn a signal into closing prices.

    ``kind="returns"`` treats the signal as daily log returns (prices follow a
    random walk in log space); ``kind="log-level"`` uses it as the log price
    itself.
    """
    s = scale * np.asarray(signal, dtype=float)
    if kind == "returns":
        return start * np.exp(np.concatenate([[0.0], np.cumsum(s[1:])]))
    if kind == "log-level":
        return start * np.exp(s)
    raise ValueError(f"unknown kind {kind!r}")


def panel(signals, kind: str = "returns", start: str = "2000-01-03", scale: float = 0.01,
          names=None) -> dict[str, PriceSeries]:
    """PriceSeries for each row of ``signals`` on a common business-day calendar."""
    signals = np.atleast_2d(signals)
    dates = business_days(signals.shape[1], start)
    names = names or [f"S{i:02d}" for i in range(signals.shape[0])]
    return {name: PriceSeries(name, dates, to_prices(sig, scale, kind))
            for name, sig in zip(names, signals)}


def crisis_panel(n_stocks: int, n_days: int, block: tuple[int, int], rng: np.random.Generator,
                 lag: int = 2, strength: float = 0.8):
    """Independent noise except inside ``block = (start, stop)``.

    Inside the block the first half of the stocks load on a common factor
    ``f[t]`` and the second half on ``f[t - lag]``, so every leader drives
    every follower with a delay of ``lag`` days.
    """
    signals = rng.standard_normal((n_stocks, n_days))
    f = rng.standard_normal(n_days + lag)
    lo, hi = block
    leaders = n_stocks // 2
    signals[:leaders, lo:hi] += strength * f[lag + lo : lag + hi]
    signals[leaders:, lo:hi] += strength * f[lo:hi]
    return signals
