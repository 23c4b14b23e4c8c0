"""Geometric (log) returns at a lag of ``delta`` steps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ReturnSeries:
    values: np.ndarray
    delta: int
    parent_length: int


def log_returns(prices, delta: int = 1) -> ReturnSeries:
    """Return ``ln p[i + delta] - ln p[i]`` for every admissible ``i``.

    The lag counts positions in ``prices``; gaps left by removed days are
    treated as consecutive steps.
    """
    p = np.asarray(prices, dtype=float)
    if delta < 1:
        raise ValueError("delta must be a positive integer")
    if p.size <= delta:
        raise ValueError("window too short for lag")
    if not np.all(p > 0):
        raise ValueError("prices must be positive")
    lp = np.log(p)
    return ReturnSeries(lp[delta:] - lp[:-delta], delta, p.size)
