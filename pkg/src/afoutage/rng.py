"""Counter-based random streams.

Every variate is addressed by ``(seed, stream, index)``: the Philox key is
``(seed, stream)`` and the counter selects the index, so any slice of a stream
can be regenerated independently of how the work was chunked or threaded.
"""
from __future__ import annotations

import numpy as np
from numpy.random import Philox

_PER_COUNTER = 4  # Philox4x64 emits four 64-bit words per counter value
_MASK64 = (1 << 64) - 1


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def raw_words(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Words ``start .. start+count-1`` of the 64-bit stream keyed by (seed, stream)."""
    block, skip = divmod(int(start), _PER_COUNTER)
    key = np.array([int(seed) & _MASK64, int(stream) & _MASK64], dtype=np.uint64)
    bitgen = Philox(key=key, counter=block)
    return bitgen.random_raw(count + skip)[skip:]


def uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniform doubles on (0, 1]; zero cannot occur."""
    words = raw_words(seed, stream, start, count)
    return ((words >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def exponentials(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Unit-mean exponentials by inverse transform, ``-ln(u)``."""
    return -np.log(uniforms(seed, stream, start, count))
