"""Outage probability of multi-hop amplify-and-forward fixed-gain relays in Rayleigh fading."""
from afoutage.mc_sim import McEstimate, estimate_bound_outage, estimate_outage
from afoutage.outage_analysis import OutageApproxResult, approx_outage, closed_form_eq15, theorem1_bound
from afoutage.prodexp import AccuracyError, EvalResult
from afoutage.relay_model import (
    ChannelDraw,
    DerivedGains,
    EffectiveThresholds,
    ExplicitGains,
    RelayChainConfig,
    effective_thresholds,
    end_to_end_snr,
    upper_bound_snr,
)

__version__ = "0.1.0"
