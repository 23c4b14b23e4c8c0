import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infoflow.entropy import TEMatrix
from infoflow.validation import (BenchmarkPool, benchmark_pool, bracket_range, flow_matrix,
                                 flow_weight, link_count_ratio, survival_ratio)


def _logistic(r):
    return float(1 / (mpmath.exp(200 * (mpmath.mpf(r) - mpmath.mpf("0.03"))) + 1))


def test_flow_weight_reference_points():
    assert flow_weight(0.03) == 0.5
    assert flow_weight(0.0) == pytest.approx(float(1 / (1 + mpmath.exp(-6))), abs=1e-12)
    assert flow_weight(0.05) == pytest.approx(float(1 / (1 + mpmath.exp(4))), abs=1e-12)
    assert flow_weight(0.0) == pytest.approx(0.997527, abs=1e-6)
    assert flow_weight(0.05) == pytest.approx(0.017986, abs=1e-6)
    assert flow_weight(1.0) < 1e-80


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5))
def test_flow_weight_monotone(r1, r2):
    if r1 < r2:
        assert flow_weight(r1) >= flow_weight(r2)
    assert 0.0 <= flow_weight(r1) <= 1.0


def test_flow_weight_strictly_decreasing_near_midpoint():
    r = np.linspace(0, 0.2, 401)
    w = flow_weight(r)
    assert np.all(np.diff(w) < 0)


def test_survival_ratio_identical_sets():
    t = [0.1, 0.2, 0.2, 0.5]
    assert all(survival_ratio(x, t, t) == 1.0 for x in t)


def test_survival_ratio_empty_surrogate_tail():
    assert survival_ratio(4.0, [1, 2, 3, 4], [0.5, 1.0]) == 0.0


def test_survival_ratio_hand_count():
    assert survival_ratio(2, [1, 2, 3, 4], [1, 1, 1, 1]) == 0.0
    assert survival_ratio(1, [1, 2, 3, 4], [1, 1, 1, 2]) == 1.0
    assert survival_ratio(3, [1, 2, 3, 4], [1, 3, 3, 5]) == pytest.approx((3 / 4) / (2 / 4))


def test_survival_ratio_contract():
    with pytest.raises(ValueError):
        survival_ratio(10, [1, 2], [1, 2])
    with pytest.raises(ValueError):
        survival_ratio(1, [1, 2], [])


def _matrix(values):
    v = np.array(values, dtype=float)
    return TEMatrix(v, np.isfinite(v))


NAN = float("nan")
HAND_REAL = [[NAN, 0.10, 0.02],
             [0.05, NAN, 0.01],
             [0.03, 0.04, NAN]]
HAND_SURR = [0.005, 0.01, 0.015, 0.02, 0.02, 0.025, 0.03, 0.035, 0.04, 0.045, 0.06, 0.07]
# r = (#S >= x / 12) / (#T >= x / 6), counted by hand
HAND_R = [[None, 0.0, (9 / 12) / (5 / 6)],
          [(2 / 12) / (2 / 6), None, (11 / 12) / (6 / 6)],
          [(6 / 12) / (4 / 6), (4 / 12) / (3 / 6), None]]


def test_flow_matrix_hand_example():
    F = flow_matrix(_matrix(HAND_REAL), np.array(HAND_SURR))
    for i in range(3):
        for j in range(3):
            if i == j:
                assert F.weights[i, j] == 0.0 and not F.valid[i, j]
            else:
                expected = 1.0 / (math.exp(200.0 * (HAND_R[i][j] - 0.03)) + 1.0)
                assert F.weights[i, j] == pytest.approx(expected, abs=1e-12)
    assert F.weights[0, 1] > 0.99


def test_flow_matrix_dominated_by_surrogates(rng):
    real = rng.uniform(0, 0.01, (5, 5))
    np.fill_diagonal(real, np.nan)
    F = flow_matrix(_matrix(real), rng.uniform(0.02, 0.05, 200))
    assert np.all(F.weights[F.valid] <= 0.5)


def test_flow_matrix_needs_benchmark():
    with pytest.raises(ValueError):
        flow_matrix(_matrix(HAND_REAL), np.zeros(0))


def test_link_count_ratio():
    m = _matrix(HAND_REAL)
    assert link_count_ratio(m, m, 0.03) == 1.0
    real = _matrix(np.where(np.eye(9, dtype=bool), np.nan, 0.0))
    real.values[np.unravel_index(np.flatnonzero(~np.eye(9, dtype=bool))[:40], (9, 9))] = 0.5
    surr = _matrix(np.where(np.eye(9, dtype=bool), np.nan, 0.0))
    surr.values[np.unravel_index(np.flatnonzero(~np.eye(9, dtype=bool))[:10], (9, 9))] = 0.5
    assert link_count_ratio(real, surr) == 4.0
    zero = _matrix(np.where(np.eye(3, dtype=bool), np.nan, 0.0))
    assert link_count_ratio(m, zero) is None
    # ties at the threshold do not count
    at_threshold = _matrix([[NAN, 0.03], [0.03, NAN]])
    assert link_count_ratio(m, at_threshold, 0.03) is None


def test_link_count_ratio_mean_over_realizations():
    real = _matrix([[NAN, 0.5], [0.5, NAN]])
    s1 = _matrix([[NAN, 0.5], [0.0, NAN]])
    s2 = _matrix([[NAN, 0.5], [0.5, NAN]])
    assert link_count_ratio(real, [s1, s2]) == 2 / 1.5


@pytest.mark.parametrize("w,n,b,expected", [
    (0, 141, 10, (0, 10)), (5, 141, 10, (0, 15)), (70, 141, 10, (60, 80)),
    (140, 141, 10, (130, 140)), (0, 1, 10, (0, 0)),
])
def test_bracket_truncation(w, n, b, expected):
    assert bracket_range(w, n, b) == expected


def test_benchmark_pool_spans_bracket():
    mats = [[_matrix([[NAN, float(w)], [float(w), NAN]])] for w in range(30)]
    pool = benchmark_pool(mats, 3, bracket=10)
    assert isinstance(pool, BenchmarkPool)
    assert pool.n_windows == 14 and len(pool) == 28
    assert set(pool.values) == set(range(14))
    with pytest.raises(IndexError):
        bracket_range(30, 30, 10)


@pytest.mark.slow
def test_null_filtering_false_positive_rate():
    # independent panels: 10 stocks, one window, surrogate benchmark of one realization
    from infoflow.pipeline import RunConfig, run
    from infoflow.synthetic import panel
    fractions = []
    for seed in range(50):
        rng = np.random.default_rng(seed)
        res = run(RunConfig(window_length=300, deltas=(1,), seed=seed), panel(rng.standard_normal((10, 300))))
        F = res.flows[1][0]
        fractions.append(np.mean(F.weights[F.valid] > 0.5))
    assert np.mean(fractions) <= 0.05
