"""Window-level observables computed from flow matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .validation import FlowMatrix


@dataclass
class WindowReport:
    window: int
    center_date: str
    delta: int
    total_flow: float
    drift: float | None
    directionality: np.ndarray = field(repr=False)
    link_ratio: float | None
    n_valid: int = 0
    pool_size: int = 0


def _masked(F: FlowMatrix) -> np.ndarray:
    return np.where(F.valid, F.weights, 0.0)


def total_flow(F: FlowMatrix) -> float:
    """Sum of all valid weights."""
    return float(np.sum(_masked(F)))


def window_drift(F_w: FlowMatrix, F_next: FlowMatrix) -> float:
    """Mean absolute change of each stock's outgoing flow between windows."""
    if F_w.weights.shape != F_next.weights.shape:
        raise ValueError("flow matrices must have the same size")
    change = _masked(F_next).sum(axis=1) - _masked(F_w).sum(axis=1)
    return float(np.mean(np.abs(change)))


def directionality(F: FlowMatrix) -> np.ndarray:
    """Outgoing minus incoming flow per stock; positive values lead."""
    m = _masked(F)
    np.fill_diagonal(m, 0.0)
    # pairwise differences first so symmetric input gives exact zeros
    return (m - m.T).sum(axis=1)


def smooth_directionality(reports: Sequence, group: int = 3) -> np.ndarray:
    """Average directionality over non-overlapping groups of windows.

    Accepts ``WindowReport`` objects or plain vectors. A trailing partial
    group is averaged over its actual size.
    """
    if group < 1:
        raise ValueError("group must be >= 1")
    rows = [np.asarray(getattr(r, "directionality", r), dtype=float) for r in reports]
    if not rows:
        return np.zeros((0, 0))
    data = np.vstack(rows)
    return np.vstack([data[i : i + group].mean(axis=0) for i in range(0, len(data), group)])


def influence_ranking(reports: Sequence[WindowReport]) -> np.ndarray:
    """Stock indices ordered by descending total directionality over time.

    Ties keep the lower index first.
    """
    total = np.sum([r.directionality for r in reports], axis=0)
    return np.argsort(-total, kind="stable")
