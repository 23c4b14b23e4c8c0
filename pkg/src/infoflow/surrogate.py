"""Fourier phase-randomized surrogates.

Every positive-frequency component gets an independent uniform phase on
``[0, 2*pi)``; negative frequencies get the opposite phase so the inverse
transform is real. The DC term and, for even lengths, the Nyquist term are
left untouched. The amplitude spectrum is therefore preserved exactly up to
rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DOMAINS = ("log-price", "price")


@dataclass(frozen=True)
class SurrogateSeries:
    values: np.ndarray
    source: int = 0
    realization: int = 0
    window: int = 0
    imag_residue: float = 0.0


def seed_for(master_seed: int, window: int, stock: int, realization: int) -> np.random.SeedSequence:
    """Independent stream per (window, stock, realization)."""
    return np.random.SeedSequence(int(master_seed), spawn_key=(int(window), int(stock), int(realization)))


def random_phases(n: int, rng: np.random.Generator) -> np.ndarray:
    """Antisymmetric phase vector for a length-``n`` full FFT."""
    phi = np.zeros(n)
    m = (n - 1) // 2  # strictly positive, non-Nyquist frequencies
    draw = rng.uniform(0.0, 2.0 * np.pi, size=m)
    phi[1 : m + 1] = draw
    phi[n - m :] = -draw[::-1]
    return phi


def phase_randomize(series, rng: np.random.Generator, **meta) -> SurrogateSeries:
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("phase randomization needs a 1-d series of length >= 2")
    spectrum = np.fft.fft(x)
    z = np.fft.ifft(spectrum * np.exp(1j * random_phases(x.size, rng)))
    residue = float(np.max(np.abs(z.imag)))
    return SurrogateSeries(z.real.copy(), imag_residue=residue, **meta)


def randomize_prices(prices, rng: np.random.Generator, domain: str = "log-price", **meta) -> SurrogateSeries:
    """Surrogate of a closing-price series.

    ``domain="log-price"`` randomizes ``ln p`` and exponentiates, which keeps
    prices positive; ``"price"`` randomizes the raw prices and may produce
    non-positive values.
    """
    p = np.asarray(prices, dtype=float)
    if domain == "log-price":
        s = phase_randomize(np.log(p), rng, **meta)
        return SurrogateSeries(np.exp(s.values), s.source, s.realization, s.window, s.imag_residue)
    if domain == "price":
        return phase_randomize(p, rng, **meta)
    raise ValueError(f"unknown surrogate domain {domain!r}; expected one of {DOMAINS}")


def surrogate_window_set(window_prices: Sequence, n_realizations: int = 1, master_seed: int = 0,
                         window: int = 0, domain: str = "log-price") -> list[list[SurrogateSeries]]:
    """``n_realizations`` surrogates of each stock's windowed prices.

    Result is indexed ``[stock][realization]``. Seeds depend only on
    ``(master_seed, window, stock, realization)``, so the output does not
    depend on evaluation order.
    """
    out = []
    for stock, prices in enumerate(window_prices):
        reps = []
        for r in range(n_realizations):
            rng = np.random.default_rng(seed_for(master_seed, window, stock, r))
            reps.append(randomize_prices(prices, rng, domain, source=stock, realization=r, window=window))
        out.append(reps)
    return out


def spectrum_error(source, surrogate) -> tuple[float, float]:
    """Largest per-bin relative amplitude error and the largest absolute error
    relative to the source's peak amplitude."""
    a = np.abs(np.fft.fft(np.asarray(source, dtype=float)))
    b = np.abs(np.fft.fft(np.asarray(surrogate, dtype=float)))
    diff = np.abs(a - b)
    peak = a.max()
    if peak == 0:
        return float(diff.max()), float(diff.max())
    nonzero = a > 0
    rel = np.zeros_like(a)
    rel[nonzero] = diff[nonzero] / a[nonzero]
    rel[~nonzero] = diff[~nonzero] / peak
    return float(rel.max()), float(diff.max() / peak)
