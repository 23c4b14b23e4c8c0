"""Ordinal-pattern symbolization.

A symbol of length ``k`` at step ``delta`` ending at index ``t`` looks at
``series[t - (k-1)*delta], ..., series[t - delta], series[t]``. Positions are
numbered 1..k oldest first, and the pattern lists positions in order of
ascending value; equal values keep their positional order.

Patterns are identified with their lexicographic rank among the ``k!``
permutations, which is what the counting code works with.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np


@dataclass(frozen=True)
class OrdinalSymbol:
    pattern: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.pattern)

    @property
    def code(self) -> int:
        return encode(self.pattern)


@dataclass(frozen=True)
class SymbolSequence:
    codes: np.ndarray
    k: int
    delta: int
    source_length: int

    def __len__(self) -> int:
        return self.codes.size

    @property
    def symbols(self) -> list[OrdinalSymbol]:
        return [OrdinalSymbol(decode(int(c), self.k)) for c in self.codes]


def encode(pattern) -> int:
    """Lexicographic rank of a permutation of ``1..k``."""
    p = list(pattern)
    k = len(p)
    if sorted(p) != list(range(1, k + 1)):
        raise ValueError(f"{pattern!r} is not a permutation of 1..{k}")
    code = 0
    for i, v in enumerate(p):
        smaller_after = sum(1 for u in p[i + 1:] if u < v)
        code += smaller_after * factorial(k - 1 - i)
    return code


def decode(code: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`encode`."""
    if k < 1:
        raise ValueError("k must be positive")
    if not 0 <= code < factorial(k):
        raise ValueError(f"code {code} out of range for k={k}")
    remaining = list(range(1, k + 1))
    out = []
    for i in range(k - 1, -1, -1):
        q, code = divmod(code, factorial(i))
        out.append(remaining.pop(q))
    return tuple(out)


def symbolize_at(series, t: int, k: int, delta: int = 1) -> OrdinalSymbol:
    """Symbol of the ``k`` values ending at (0-based) index ``t``."""
    x = np.asarray(series, dtype=float)
    first = t - (k - 1) * delta
    if first < 0 or t >= x.size:
        raise ValueError(f"not enough history for k={k}, delta={delta} at t={t}")
    window = x[first : t + 1 : delta]
    order = np.argsort(window, kind="stable")
    return OrdinalSymbol(tuple(int(i) + 1 for i in order))


def pattern_codes(series, k: int, delta: int = 1) -> np.ndarray:
    """Codes of every admissible symbol, in increasing order of last index.

    Element ``i`` is the symbol ending at index ``i + (k-1)*delta``.
    """
    x = np.asarray(series, dtype=float)
    if k < 1 or delta < 1:
        raise ValueError("k and delta must be positive")
    span = (k - 1) * delta
    n = x.size - span
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    assert not np.isnan(x).any(), "NaN reached symbolization"
    if k == 1:
        return np.zeros(n, dtype=np.int64)
    cols = np.stack([x[j * delta : j * delta + n] for j in range(k)], axis=1)
    order = np.argsort(cols, axis=1, kind="stable")
    codes = np.zeros(n, dtype=np.int64)
    for i in range(k - 1):
        smaller_after = (order[:, i + 1:] < order[:, i : i + 1]).sum(axis=1)
        codes += smaller_after * factorial(k - 1 - i)
    return codes


def symbol_sequence(series, k: int, delta: int = 1) -> SymbolSequence:
    x = np.asarray(series, dtype=float)
    return SymbolSequence(pattern_codes(x, k, delta), k, delta, x.size)
