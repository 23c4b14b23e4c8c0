"""Directed information-flow networks between price series.

Symbolic transfer entropy between every pair of stocks in sliding windows,
filtered against Fourier phase-randomized surrogates and summarized into
window-level flow, drift and directionality measures.
"""
__version__ = "0.1.0"

from .entropy import TEMatrix, joint_counts, te_matrix, transfer_entropy, transfer_entropy_ste
from .market_data import (AlignedPair, PriceSeries, WindowSpec, align_pair, enumerate_windows,
                          load_price_csv)
from .metrics import (WindowReport, directionality, smooth_directionality, total_flow,
                      window_drift)
from .returns import ReturnSeries, log_returns
from .surrogate import phase_randomize, surrogate_window_set
from .symbolic import decode, encode, symbol_sequence, symbolize_at
from .validation import FlowMatrix, flow_matrix, flow_weight, link_count_ratio, survival_ratio

__all__ = [
    "AlignedPair", "FlowMatrix", "PriceSeries", "ReturnSeries", "TEMatrix", "WindowReport",
    "WindowSpec", "align_pair", "decode", "directionality", "encode", "enumerate_windows",
    "flow_matrix", "flow_weight", "joint_counts", "link_count_ratio", "load_price_csv",
    "log_returns", "phase_randomize", "smooth_directionality", "surrogate_window_set",
    "survival_ratio", "symbol_sequence", "symbolize_at", "te_matrix", "total_flow",
    "transfer_entropy", "transfer_entropy_ste", "window_drift",
]
