"""Filtering raw transfer entropies against a pooled surrogate benchmark.

Each real value ``x`` is compared with the surrogate values through the ratio
of tail frequencies

    r(x) = P_surrogate(T >= x) / P_real(T >= x)

using exact empirical tails instead of binned histograms. Small ``r`` means
``x`` is rarely reached by the null model; the logistic weight
``1 / (exp(2 a (r - r_star)) + 1)`` turns it into a link strength in [0, 1].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .entropy import TEMatrix

DEFAULT_A = 100.0
DEFAULT_R_STAR = 0.03
DEFAULT_BRACKET = 10
DEFAULT_LINK_THRESHOLD = 0.03


@dataclass(frozen=True)
class BenchmarkPool:
    values: np.ndarray
    window: int
    bracket: int
    first: int
    last: int

    @property
    def n_windows(self) -> int:
        return self.last - self.first + 1

    def __len__(self) -> int:
        return self.values.size


@dataclass
class FlowMatrix:
    weights: np.ndarray
    valid: np.ndarray
    window: int = 0
    delta: int = 1
    a: float = DEFAULT_A
    r_star: float = DEFAULT_R_STAR

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def _tail_count(sorted_values: np.ndarray, x) -> np.ndarray:
    return sorted_values.size - np.searchsorted(sorted_values, x, side="left")


def survival_ratio(x, real_values, surrogate_values) -> float | np.ndarray:
    """Surrogate tail frequency over real tail frequency at ``x``.

    ``x`` may be an array; every element must have a non-empty real tail,
    which holds whenever it is drawn from ``real_values``.
    """
    t = np.sort(np.asarray(real_values, dtype=float).ravel())
    s = np.sort(np.asarray(surrogate_values, dtype=float).ravel())
    if t.size == 0 or s.size == 0:
        raise ValueError("both real and surrogate values must be non-empty")
    xs = np.asarray(x, dtype=float)
    real_tail = _tail_count(t, xs)
    if np.any(real_tail == 0):
        raise ValueError("x lies above every real value; survival ratio undefined")
    r = (_tail_count(s, xs) / s.size) / (real_tail / t.size)
    return float(r) if np.ndim(r) == 0 else r


def flow_weight(r, a: float = DEFAULT_A, r_star: float = DEFAULT_R_STAR):
    """Logistic soft threshold, decreasing in ``r``, equal to 1/2 at ``r_star``."""
    arg = 2.0 * a * (np.asarray(r, dtype=float) - r_star)
    with np.errstate(over="ignore"):
        w = 1.0 / (np.exp(arg) + 1.0)
    return float(w) if np.ndim(w) == 0 else w


def bracket_range(window: int, n_windows: int, bracket: int = DEFAULT_BRACKET) -> tuple[int, int]:
    """Inclusive window range pooled for ``window``, truncated at the ends."""
    if not 0 <= window < n_windows:
        raise IndexError(f"window {window} outside 0..{n_windows - 1}")
    return max(window - bracket, 0), min(window + bracket, n_windows - 1)


def benchmark_pool(surrogates: Sequence[Sequence[TEMatrix]], window: int,
                   bracket: int = DEFAULT_BRACKET) -> BenchmarkPool:
    """Pool the valid surrogate values of every realization in the bracket.

    ``surrogates[w]`` lists the surrogate matrices of window ``w``.
    """
    first, last = bracket_range(window, len(surrogates), bracket)
    parts = [m.valid_values() for w in range(first, last + 1) for m in surrogates[w]]
    values = np.concatenate(parts) if parts else np.zeros(0)
    return BenchmarkPool(values, window, bracket, first, last)


def flow_matrix(te_real: TEMatrix, pool: BenchmarkPool, a: float = DEFAULT_A,
                r_star: float = DEFAULT_R_STAR) -> FlowMatrix:
    pool_values = pool.values if isinstance(pool, BenchmarkPool) else np.asarray(pool, dtype=float)
    if pool_values.size == 0:
        raise ValueError("empty surrogate benchmark")
    weights = np.zeros(te_real.values.shape)
    real = te_real.valid_values()
    if real.size:
        r = survival_ratio(real, real, pool_values)
        weights[te_real.valid] = flow_weight(r, a, r_star)
    return FlowMatrix(weights, te_real.valid.copy(), te_real.window, te_real.delta, a, r_star)


def link_count_ratio(te_real: TEMatrix, te_surrogate, threshold: float = DEFAULT_LINK_THRESHOLD):
    """Number of real cells above ``threshold`` over the surrogate count.

    ``te_surrogate`` may be a single matrix or a sequence of realizations, in
    which case the surrogate count is their mean. Returns ``None`` when no
    surrogate cell exceeds the threshold.
    """
    if isinstance(te_surrogate, TEMatrix):
        te_surrogate = [te_surrogate]
    real = int(np.sum(te_real.valid_values() > threshold))
    surr = float(np.mean([np.sum(m.valid_values() > threshold) for m in te_surrogate]))
    if surr == 0:
        return None
    return real / surr
