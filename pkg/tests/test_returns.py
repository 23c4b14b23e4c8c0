import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infoflow.returns import log_returns


def test_constant_prices():
    assert log_returns([5, 5, 5, 5], 1).values.tolist() == [0.0, 0.0, 0.0]


def test_exponential_prices():
    r = log_returns([1, math.e, math.e ** 2], 1)
    assert np.allclose(r.values, [1.0, 1.0], atol=1e-15)


def test_lag_two_on_table_prefix():
    r = log_returns([13, 22, 45, 60], 2)
    assert r.values == pytest.approx([math.log(45 / 13), math.log(60 / 22)], abs=1e-15)
    assert r.delta == 2 and r.parent_length == 4


def test_too_short():
    with pytest.raises(ValueError, match="too short"):
        log_returns([1.0, 2.0], 2)


def test_rejects_non_positive():
    with pytest.raises(ValueError):
        log_returns([1.0, -2.0, 3.0], 1)


prices = st.lists(st.floats(0.01, 1e4), min_size=4, max_size=60)


@settings(max_examples=60, deadline=None)
@given(prices, st.floats(1e-3, 1e3), st.integers(1, 3))
def test_scale_invariance(p, c, delta):
    a = log_returns(p, delta).values
    b = log_returns(np.array(p) * c, delta).values
    assert a.size == len(p) - delta
    assert np.max(np.abs(a - b)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(prices)
def test_additivity(p):
    r1 = log_returns(p, 1).values
    r2 = log_returns(p, 2).values
    assert np.max(np.abs(r2 - (r1[:-1] + r1[1:]))) <= 1e-12
