"""Physical-layer model of an N-hop amplify-and-forward chain with fixed gains.

Hop ``k`` (1-based) has transmit power ``E_k``, receiver noise variance
``sigma_k^2`` and squared fading gain ``|h_k|^2``.  Relay ``l`` scales its
received signal by a fixed ``A_l`` that depends on average powers only.
All powers are linear.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "ExplicitGains",
    "DerivedGains",
    "RelayChainConfig",
    "ChannelDraw",
    "EffectiveThresholds",
    "fixed_gain_sq",
    "gains_sq",
    "end_to_end_snr",
    "upper_bound_snr",
    "noise_accum_factor",
    "effective_thresholds",
    "db_to_linear",
]


def db_to_linear(db: float) -> float:
    return 10.0 ** (float(db) / 10.0)


def _positive_tuple(values, name: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not (v > 0.0 and math.isfinite(v)):
            raise ValueError(f"{name} must be finite and > 0, got {v}")
    return out


@dataclass(frozen=True)
class ExplicitGains:
    """User-chosen squared amplification factors ``A_1^2 .. A_{N-1}^2``."""

    gains_sq: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gains_sq", _positive_tuple(self.gains_sq, "gains_sq"))


@dataclass(frozen=True)
class DerivedGains:
    """Gains computed from powers: ``A_l^2 = E_{l+1} / (E_l + sigma_l^2)``."""


GainMode = Union[ExplicitGains, DerivedGains]


@dataclass(frozen=True)
class RelayChainConfig:
    n_hops: int
    tx_powers: tuple[float, ...]
    noise_vars: tuple[float, ...]
    gain_mode: GainMode = field(default_factory=DerivedGains)

    def __post_init__(self):
        if isinstance(self.n_hops, bool) or not isinstance(self.n_hops, (int, np.integer)):
            raise TypeError(f"n_hops must be an integer, got {self.n_hops!r}")
        n = int(self.n_hops)
        if n < 1:
            raise ValueError(f"n_hops must be >= 1, got {n}")
        object.__setattr__(self, "n_hops", n)
        object.__setattr__(self, "tx_powers", _positive_tuple(self.tx_powers, "tx_powers"))
        object.__setattr__(self, "noise_vars", _positive_tuple(self.noise_vars, "noise_vars"))
        if len(self.tx_powers) != n:
            raise ValueError(f"expected {n} transmit powers, got {len(self.tx_powers)}")
        if len(self.noise_vars) != n:
            raise ValueError(f"expected {n} noise variances, got {len(self.noise_vars)}")
        if isinstance(self.gain_mode, ExplicitGains):
            if len(self.gain_mode.gains_sq) != n - 1:
                raise ValueError(
                    f"explicit gains need {n - 1} entries for {n} hops, "
                    f"got {len(self.gain_mode.gains_sq)}"
                )
        elif not isinstance(self.gain_mode, DerivedGains):
            raise TypeError(f"unknown gain mode {self.gain_mode!r}")

    @classmethod
    def uniform(cls, n_hops: int, source_power: float, noise_var: float = 1.0,
                gain_sq: float | None = None) -> "RelayChainConfig":
        """Equal powers and noise on every hop; explicit common gain if given."""
        mode = DerivedGains() if gain_sq is None else ExplicitGains((gain_sq,) * (n_hops - 1))
        return cls(n_hops, (source_power,) * n_hops, (noise_var,) * n_hops, mode)

    @property
    def equal_noise(self) -> bool:
        return all(s == self.noise_vars[0] for s in self.noise_vars)

    def prefix(self, n: int) -> "RelayChainConfig":
        """The first ``n`` hops of this chain (hop ``n`` becomes the destination)."""
        if not 1 <= n <= self.n_hops:
            raise ValueError(f"prefix length must be in [1, {self.n_hops}], got {n}")
        if isinstance(self.gain_mode, ExplicitGains):
            mode: GainMode = ExplicitGains(self.gain_mode.gains_sq[: n - 1])
        else:
            mode = DerivedGains()
        return RelayChainConfig(n, self.tx_powers[:n], self.noise_vars[:n], mode)


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the squared fading amplitudes ``|h_1|^2 .. |h_N|^2``."""

    h_sq: tuple[float, ...]

    def __post_init__(self):
        h = tuple(float(v) for v in self.h_sq)
        if any(not v >= 0.0 for v in h):
            raise ValueError("squared fading amplitudes must be >= 0")
        object.__setattr__(self, "h_sq", h)


@dataclass(frozen=True)
class EffectiveThresholds:
    """Per-hop normalized thresholds and noise-accumulation factors.

    ``accum_factor`` is exact for averaged noise only when all noise variances
    are equal; ``equal_noise`` records whether that holds.
    """

    gamma_bar: tuple[float, ...]
    accum_factor: tuple[float, ...]
    equal_noise: bool = True


def fixed_gain_sq(config: RelayChainConfig, l: int) -> float:
    """Fixed gain ``A_l^2 = E_{l+1} / (E_l + sigma_l^2)`` for relay ``l``."""
    if not isinstance(config.gain_mode, DerivedGains):
        raise ValueError("fixed_gain_sq needs a DerivedGains configuration")
    if not 1 <= l <= config.n_hops - 1:
        raise IndexError(f"relay index must be in [1, {config.n_hops - 1}], got {l}")
    return config.tx_powers[l] / (config.tx_powers[l - 1] + config.noise_vars[l - 1])


def gains_sq(config: RelayChainConfig) -> tuple[float, ...]:
    """Resolved ``A_1^2 .. A_{N-1}^2`` regardless of gain mode."""
    if isinstance(config.gain_mode, ExplicitGains):
        return config.gain_mode.gains_sq
    return tuple(fixed_gain_sq(config, l) for l in range(1, config.n_hops))


def _as_draws(config: RelayChainConfig, draw) -> np.ndarray:
    h = np.asarray(draw.h_sq if isinstance(draw, ChannelDraw) else draw, dtype=np.float64)
    if h.shape[-1:] != (config.n_hops,):
        raise ValueError(f"draw must have {config.n_hops} entries per realization, got shape {h.shape}")
    return h


def end_to_end_snr(config: RelayChainConfig, draw, source_scale: float = 1.0):
    """Instantaneous end-to-end SNR with relay noise forwarded and amplified.

    ``draw`` is a ``ChannelDraw`` or an array whose last axis has length N
    (rows are evaluated independently).  ``source_scale`` multiplies ``E_1``.

        gamma_N = prod(A^2) prod(|h|^2) E_1
                  / (sum_j prod_{i>=j} (A_i^2 |h_{i+1}|^2) sigma_j^2 + sigma_N^2)
    """
    h = _as_draws(config, draw)
    a2 = np.asarray(gains_sq(config))
    e1 = config.tx_powers[0] * source_scale
    sig = np.asarray(config.noise_vars)
    numerator = np.prod(a2) * np.prod(h, axis=-1) * e1
    # per-relay factor A_i^2 |h_{i+1}|^2 for i = 1..N-1, then suffix products
    stage = a2 * h[..., 1:]
    suffix = np.flip(np.cumprod(np.flip(stage, axis=-1), axis=-1), axis=-1)
    denominator = np.sum(suffix * sig[:-1], axis=-1) + sig[-1]
    out = numerator / denominator
    return float(out) if out.ndim == 0 else out


def upper_bound_snr(config: RelayChainConfig, draw):
    """SNR with relay noise dropped: ``prod(A^2) prod(|h|^2) E_1 / sigma_N^2``."""
    h = _as_draws(config, draw)
    a2 = np.asarray(gains_sq(config))
    out = np.prod(a2) * np.prod(h, axis=-1) * config.tx_powers[0] / config.noise_vars[-1]
    return float(out) if out.ndim == 0 else out


def noise_accum_factor(gains: Sequence[float], n: int) -> float:
    """``c_n = sum_{j=1}^{n-1} prod_{i=j}^{n-1} A_i^2 + 1`` (``c_1 = 1``)."""
    total, run = 1.0, 1.0
    for a2 in reversed(gains[: n - 1]):
        run *= a2
        total += run
    return total


def effective_thresholds(config: RelayChainConfig, gamma_th: float) -> EffectiveThresholds:
    """Thresholds mapped into the domain of the fading product for each prefix length.

    ``gamma_bar[n-1] = sigma_n^2 gamma_th / (A_{n-1}^2 ... A_1^2 E_1)``.
    """
    gamma_th = float(gamma_th)
    if not (gamma_th > 0.0 and math.isfinite(gamma_th)):
        raise ValueError(f"threshold must be finite and > 0, got {gamma_th}")
    a2 = gains_sq(config)
    gbar, c = [], []
    gain_prod = 1.0
    for n in range(1, config.n_hops + 1):
        if n >= 2:
            gain_prod *= a2[n - 2]
        gbar.append(config.noise_vars[n - 1] * gamma_th / (gain_prod * config.tx_powers[0]))
        c.append(noise_accum_factor(a2, n))
    return EffectiveThresholds(tuple(gbar), tuple(c), config.equal_noise)
