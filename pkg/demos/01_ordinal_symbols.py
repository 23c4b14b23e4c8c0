"""
Ordinal symbols
===============

Turning a price path into a stream of order patterns.
"""
import numpy as np

from infoflow.symbolic import decode, encode, pattern_codes, symbolize_at

series = [13, 22, 45, 60, 12, 33, 70, 19, 20, 15, 12, 42]

# a symbol lists window positions (oldest first) in order of increasing value
for k, delta in [(2, 1), (3, 1), (3, 2)]:
    sym = symbolize_at(series, len(series) - 1, k, delta)
    print(f"k={k} delta={delta}: last symbol {sym.pattern} -> code {sym.code}")

# codes are lexicographic ranks, so k=3 has 6 of them
print([decode(c, 3) for c in range(6)])
print(encode((2, 3, 1)))

# the whole stream at once
codes = pattern_codes(series, 3, 1)
print("codes :", codes)
print("counts:", np.bincount(codes, minlength=6))

# ties resolve to the earlier position, and any monotone map leaves codes unchanged
print(symbolize_at([5, 5, 5], 2, 3, 1).pattern)
print(np.array_equal(pattern_codes(np.exp(series[:8]), 3, 1), pattern_codes(series[:8], 3, 1)))
