"""Plug-in symbolic transfer entropy between two aligned series.

For a target ``x`` and source ``y`` the estimator counts, for every admissible
index ``t``, the triple

* the (k+1)-symbol of ``x`` ending at ``t`` (the predicted object),
* the k-symbol of ``x`` ending at ``t - delta`` (the target's own past),
* the k-symbol of ``y`` ending at ``t - delta`` (the source's past),

and evaluates ``sum p(f,a,b) log2[p(f|a,b) / p(f|a)]`` over observed triples.
The (k+1)-symbol shares its ``k`` oldest values with the target's past symbol.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Mapping

import numpy as np

from .symbolic import pattern_codes


class InsufficientSamples(ValueError):
    pass


@dataclass(frozen=True)
class JointCountTable:
    """Dense counts indexed ``[future_code, past_x_code, past_y_code]``."""

    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class TEMatrix:
    """Directed transfer entropy; ``values[i, j]`` is the flow from i to j.

    Invalid cells (diagonal, rejected pairs) hold NaN.
    """

    values: np.ndarray
    valid: np.ndarray
    window: int = 0
    delta: int = 1
    k: int = 2

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def valid_values(self) -> np.ndarray:
        return self.values[self.valid]


def _check(x, y, k, delta):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be aligned 1-d sequences of equal length")
    if k < 1 or delta < 1:
        raise ValueError("k and delta must be positive")
    if x.size < k * delta + 1:
        raise InsufficientSamples(
            f"insufficient samples: need at least {k * delta + 1}, got {x.size}")
    return x, y


def symbol_streams(x, y, k: int, delta: int, future_k: int | None = None):
    """Aligned code streams ``(future, past_x, past_y)`` for one estimate.

    ``future_k`` is ``k + 1`` for the default estimator and ``k`` for the
    classic symbolic variant; either way the future symbol ends at ``t`` and
    the past symbols at ``t - delta``.
    """
    x, y = _check(x, y, k, delta)
    future_k = k + 1 if future_k is None else future_k
    n = x.size - k * delta
    fut = pattern_codes(x, future_k, delta)[-n:]
    return fut, pattern_codes(x, k, delta)[:n], pattern_codes(y, k, delta)[:n]


def counts_from_codes(fut, past_x, past_y, n_future: int, n_past: int) -> np.ndarray:
    flat = (fut * n_past + past_x) * n_past + past_y
    counts = np.bincount(flat, minlength=n_future * n_past * n_past)
    return counts.reshape(n_future, n_past, n_past)


def te_from_counts(counts: np.ndarray) -> float:
    """KL form of transfer entropy (bits) from a ``[f, a, b]`` count table."""
    total = counts.sum()
    if total == 0:
        raise InsufficientSamples("empty count table")
    c_ab = counts.sum(axis=0)
    c_fa = counts.sum(axis=2)
    c_a = c_ab.sum(axis=1)
    f, a, b = np.nonzero(counts)
    c = counts[f, a, b].astype(float)
    ratio = (c * c_a[a]) / (c_ab[a, b] * c_fa[f, a])
    te = float(np.sum(c * np.log2(ratio)) / total)
    # exact zero when every term is log(1); clip tiny negative rounding
    return te if te > 0.0 else 0.0


def joint_counts(x, y, k: int = 2, delta: int = 1) -> JointCountTable:
    fut, px, py = symbol_streams(x, y, k, delta)
    return JointCountTable(counts_from_codes(fut, px, py, factorial(k + 1), factorial(k)))


def transfer_entropy(x, y, k: int = 2, delta: int = 1) -> float:
    """Information flow from ``y`` to ``x`` in bits, predicting (k+1)-symbols
    of ``x`` from the k-symbol pasts of both series."""
    return te_from_counts(joint_counts(x, y, k, delta).counts)


def transfer_entropy_ste(x, y, k: int = 2, delta: int = 1) -> float:
    """Classic symbolic transfer entropy from ``y`` to ``x``: the predicted
    object is the k-symbol of ``x`` one step (``delta``) ahead."""
    fut, px, py = symbol_streams(x, y, k, delta, future_k=k)
    nk = factorial(k)
    return te_from_counts(counts_from_codes(fut, px, py, nk, nk))


def te_matrix(aligned: Mapping[tuple[int, int], tuple] , n: int, k: int = 2,
              delta: int = 1, window: int = 0) -> TEMatrix:
    """Transfer entropy for every ordered pair of ``n`` series.

    ``aligned[(i, j)]`` with ``i < j`` holds the two already-transformed,
    aligned sequences ``(s_i, s_j)`` of the pair, or ``None`` when the pair
    was rejected. Missing keys are treated as rejected. Cells whose estimate
    fails stay invalid.
    """
    values = np.full((n, n), np.nan)
    valid = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            pair = aligned.get((i, j))
            if pair is None:
                continue
            si, sj = pair
            for src, dst, a, b in ((i, j, sj, si), (j, i, si, sj)):
                try:
                    v = transfer_entropy(a, b, k, delta)
                except ValueError:
                    continue
                if np.isfinite(v):
                    assert v >= 0.0
                    values[src, dst] = v
                    valid[src, dst] = True
    return TEMatrix(values, valid, window, delta, k)
