"""Analytical outage results for fixed-gain AF chains in Rayleigh fading.

``theorem1_bound`` is the high-SNR lower bound, the CDF of the fading product
at the effective threshold.  ``approx_outage`` is the event-space recursion
that adds, hop by hop, the probability of a first outage at that hop.
``closed_form_eq15`` evaluates the unrolled N >= 3 expression term by term and
exists to cross-check the recursion.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from afoutage import prodexp
from afoutage.relay_model import RelayChainConfig, effective_thresholds, gains_sq

__all__ = [
    "NoiseMismatchWarning",
    "OutageApproxResult",
    "theorem1_bound",
    "approx_outage",
    "closed_form_eq15",
]


class NoiseMismatchWarning(UserWarning):
    """The noise-accumulation refinement is heuristic for unequal noise variances."""


@dataclass(frozen=True)
class OutageApproxResult:
    value: float
    raw_value: float
    per_hop_terms: tuple[float, ...]


def _warn_unequal_noise(config: RelayChainConfig) -> None:
    if not config.equal_noise:
        warnings.warn(
            "noise variances differ across hops; the accumulation factor assumes equal noise",
            NoiseMismatchWarning,
            stacklevel=3,
        )


def theorem1_bound(config: RelayChainConfig, gamma_th: float) -> float:
    """Lower bound on the outage probability, ``F_N(gamma_bar_N)``."""
    th = effective_thresholds(config, gamma_th)
    return prodexp.cdf(config.n_hops, th.gamma_bar[-1]).value


def approx_outage(config: RelayChainConfig, gamma_th: float, refine: bool = True) -> OutageApproxResult:
    """Recursive event-space approximation of the N-hop outage probability.

    Terms: ``1 - exp(-g_1)``, then ``exp(-g_1) F_2(g_2)``, then for n >= 3
    ``F_n(g_n) * (1 - F_n(a_n))`` with ``a_n = c_n g_n`` when ``refine`` and
    ``a_n = g_n`` otherwise.  The 2-hop term is never refined.
    """
    th = effective_thresholds(config, gamma_th)
    if refine:
        _warn_unequal_noise(config)
    g = th.gamma_bar
    terms = [-math.expm1(-g[0])]
    if config.n_hops >= 2:
        terms.append(math.exp(-g[0]) * prodexp.cdf(2, g[1]).value)
    for n in range(3, config.n_hops + 1):
        gn = g[n - 1]
        arg = th.accum_factor[n - 1] * gn if refine else gn
        terms.append(prodexp.cdf(n, gn).value * (1.0 - prodexp.cdf(n, arg).value))
    raw = math.fsum(terms)
    return OutageApproxResult(min(raw, 1.0), raw, tuple(terms))


def closed_form_eq15(config: RelayChainConfig, gamma_th: float) -> float:
    """Term-by-term unrolled form of the refined approximation, N >= 3 only.

    Deliberately does not reuse ``effective_thresholds`` or the recursion above.
    """
    N = config.n_hops
    if N < 3:
        raise ValueError(f"closed form applies to N >= 3 hops, got {N}")
    _warn_unequal_noise(config)
    gamma_th = float(gamma_th)
    if not gamma_th > 0.0:
        raise ValueError(f"threshold must be > 0, got {gamma_th}")
    A2 = gains_sq(config)
    E1 = config.tx_powers[0]
    sig = config.noise_vars

    def gbar(n):
        denom = E1
        for i in range(1, n):
            denom *= A2[i - 1]
        return sig[n - 1] * gamma_th / denom

    def G(n, x):
        return prodexp.cdf(n, x).value

    total = (1.0 - math.exp(-gbar(1))) + math.exp(-gbar(1)) * G(2, gbar(2))
    for n in range(3, N + 1):
        accum = 1.0
        for j in range(1, n):
            p = 1.0
            for i in range(j, n):
                p *= A2[i - 1]
            accum += p
        total += G(n, gbar(n)) * (1.0 - G(n, accum * gbar(n)))
    return total
