"""Seeded Monte Carlo outage estimation.

Squared fading gains come from counter-based streams: hop ``k`` of trial ``t``
is word ``t`` of the stream keyed by ``(seed, k)``.  Two configurations run
with the same seed therefore see identical draws on their common hops
(common random numbers), and chunking or threading cannot change a result
because the reduction is an integer count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from afoutage import rng
from afoutage.relay_model import RelayChainConfig, end_to_end_snr, upper_bound_snr

__all__ = [
    "DEFAULT_TRIALS",
    "McEstimate",
    "draw_channels",
    "outage_indicators",
    "estimate_outage",
    "estimate_bound_outage",
]

DEFAULT_TRIALS = 1_000_000
DEFAULT_CHUNK = 1 << 18
Z95 = 1.96


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    trials: int
    ci_half_width: float
    seed: int

    @property
    def failures(self) -> int:
        return round(self.p_hat * self.trials)


def draw_channels(n_hops: int, seed: int, start: int, count: int) -> np.ndarray:
    """Squared fading gains for trials ``start .. start+count-1``, shape (count, n_hops)."""
    cols = [rng.exponentials(seed, k, start, count) for k in range(1, n_hops + 1)]
    return np.stack(cols, axis=-1)


def _snr_fn(bound: bool) -> Callable:
    return upper_bound_snr if bound else end_to_end_snr


def outage_indicators(config: RelayChainConfig, gamma_th: float, seed: int,
                      start: int = 0, count: int = 1, bound: bool = False) -> np.ndarray:
    """Per-trial outage flags (SNR strictly below threshold) for a trial range."""
    h = draw_channels(config.n_hops, seed, start, count)
    return _snr_fn(bound)(config, h) < gamma_th


def _validate(gamma_th, trials, seed) -> tuple[float, int, int]:
    gamma_th = float(gamma_th)
    if not gamma_th > 0.0:
        raise ValueError(f"threshold must be > 0, got {gamma_th}")
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    return gamma_th, int(trials), rng.check_seed(seed)


def _estimate(config, gamma_th, trials, seed, bound, workers, chunk) -> McEstimate:
    gamma_th, trials, seed = _validate(gamma_th, trials, seed)
    starts = range(0, trials, chunk)

    def count_chunk(start: int) -> int:
        m = min(chunk, trials - start)
        return int(np.count_nonzero(outage_indicators(config, gamma_th, seed, start, m, bound)))

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            failures = sum(pool.map(count_chunk, starts))
    else:
        failures = sum(map(count_chunk, starts))
    p = failures / trials
    return McEstimate(p, trials, Z95 * math.sqrt(p * (1.0 - p) / trials), seed)


def estimate_outage(config: RelayChainConfig, gamma_th: float, trials: int = DEFAULT_TRIALS,
                    seed: int = 0, *, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> McEstimate:
    """Fraction of faded trials whose end-to-end SNR falls below ``gamma_th``."""
    return _estimate(config, gamma_th, trials, seed, False, workers, chunk)


def estimate_bound_outage(config: RelayChainConfig, gamma_th: float, trials: int = DEFAULT_TRIALS,
                          seed: int = 0, *, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> McEstimate:
    """Same as ``estimate_outage`` but thresholds the relay-noise-free SNR."""
    return _estimate(config, gamma_th, trials, seed, True, workers, chunk)
