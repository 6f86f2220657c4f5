"""Outage-vs-SNR sweeps written as CSV.

Example (the unit-gain bound figure and the gain-2 approximation figure)::

    afoutage sweep --hops 2,3,4 --gain-sq 1 --snr 0:30:2 --out fig1.csv
    afoutage sweep --hops 2,3,4 --gain-sq 2 --snr 0:30:2 --refine --out fig3.csv

SNR on the x-axis is ``10 log10(E_1 / sigma^2)``; all dB inputs are converted
as ``10 ** (dB / 10)``.
"""
from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

from afoutage import mc_sim, outage_analysis
from afoutage.prodexp import AccuracyError
from afoutage.relay_model import DerivedGains, ExplicitGains, RelayChainConfig, db_to_linear

log = logging.getLogger(__name__)

CSV_HEADER = ("n_hops", "snr_db", "mc_p", "mc_ci", "theorem1", "approx_raw", "approx_clamped")
DERIVED = "derived"


@dataclass(frozen=True)
class SweepSpec:
    hops_list: tuple[int, ...]
    gain_sq: Union[float, str] = 2.0
    snr_start_db: float = 0.0
    snr_stop_db: float = 30.0
    snr_step_db: float = 2.0
    gamma_th_db: float = 0.0
    trials: int = mc_sim.DEFAULT_TRIALS
    seed: int = 42
    refine: bool = True
    outputs: Path | None = None
    # per-hop power offsets (dB, relative to the swept SNR) and noise variances (dB)
    power_offsets_db: tuple[float, ...] | None = None
    noise_db: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.hops_list:
            raise ValueError("hops_list must not be empty")
        if any(int(n) < 1 for n in self.hops_list):
            raise ValueError(f"hop counts must be >= 1, got {self.hops_list}")
        if not self.snr_step_db > 0:
            raise ValueError(f"SNR step must be > 0, got {self.snr_step_db}")
        if self.snr_start_db > self.snr_stop_db:
            raise ValueError("SNR start must not exceed SNR stop")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if isinstance(self.gain_sq, str):
            if self.gain_sq != DERIVED:
                raise ValueError(f"gain_sq must be a positive number or {DERIVED!r}")
        elif not self.gain_sq > 0:
            raise ValueError(f"gain_sq must be > 0, got {self.gain_sq}")
        n_max = max(self.hops_list)
        for name in ("power_offsets_db", "noise_db"):
            vals = getattr(self, name)
            if vals is not None and len(vals) < n_max:
                raise ValueError(f"{name} needs at least {n_max} entries, got {len(vals)}")

    def snr_grid(self) -> list[float]:
        """Inclusive grid; points are computed from the index to avoid drift."""
        count = int(math.floor((self.snr_stop_db - self.snr_start_db) / self.snr_step_db + 1e-9))
        return [self.snr_start_db + i * self.snr_step_db for i in range(count + 1)]

    def build_config(self, n_hops: int, snr_db: float) -> RelayChainConfig:
        e1 = db_to_linear(snr_db)
        noise = tuple(db_to_linear(d) for d in (self.noise_db or (0.0,) * n_hops)[:n_hops])
        if self.gain_sq == DERIVED:
            offsets = (self.power_offsets_db or (0.0,) * n_hops)[:n_hops]
            powers = tuple(e1 * db_to_linear(d) for d in offsets)
            return RelayChainConfig(n_hops, powers, noise, DerivedGains())
        gains = ExplicitGains((float(self.gain_sq),) * (n_hops - 1))
        return RelayChainConfig(n_hops, (e1,) * n_hops, noise, gains)


@dataclass(frozen=True)
class CurveRow:
    n_hops: int
    snr_db: float
    mc_p: float
    mc_ci: float
    theorem1: float
    approx_raw: float
    approx_clamped: float


@dataclass
class OutageCurve:
    rows: list[CurveRow] = field(default_factory=list)


def _run_point(spec: SweepSpec, n_hops: int, snr_db: float) -> CurveRow:
    config = spec.build_config(n_hops, snr_db)
    gamma_th = db_to_linear(spec.gamma_th_db)
    mc = mc_sim.estimate_outage(config, gamma_th, spec.trials, spec.seed)
    bound = outage_analysis.theorem1_bound(config, gamma_th)
    approx = outage_analysis.approx_outage(config, gamma_th, refine=spec.refine)
    return CurveRow(n_hops, snr_db, mc.p_hat, mc.ci_half_width, bound, approx.raw_value, approx.value)


def run_sweep(spec: SweepSpec, workers: int = 1) -> OutageCurve:
    """Evaluate MC, bound and approximation at every (hops, SNR) grid point."""
    points = [(n, s) for n in sorted(set(spec.hops_list)) for s in spec.snr_grid()]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: _run_point(spec, *p), points))
    else:
        rows = [_run_point(spec, *p) for p in points]
    rows.sort(key=lambda r: (r.n_hops, r.snr_db))
    return OutageCurve(rows)


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def emit_csv(curve: OutageCurve, path) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in curve.rows:
                writer.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write curve to {path}: {exc}") from exc


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _snr_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        vals = ()
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step in dB, got {text!r}")
    return vals


def _gain(text: str) -> Union[float, str]:
    if text == DERIVED:
        return DERIVED
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number or '{DERIVED}', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="afoutage", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("sweep", help="outage-vs-SNR sweep to CSV",
                       description="All dB values are converted as linear = 10**(dB/10).")
    s.add_argument("--hops", type=_int_list, default=(2, 3, 4), help="hop counts, e.g. 2,3,4")
    s.add_argument("--gain-sq", type=_gain, default=2.0,
                   help="common squared relay gain A^2 (linear), or 'derived' to use A_l^2 = E_{l+1}/(E_l+sigma_l^2)")
    s.add_argument("--snr", type=_snr_range, default=(0.0, 30.0, 2.0),
                   help="SNR grid start:stop:step in dB, stop inclusive (default 0:30:2)")
    s.add_argument("--threshold-db", type=float, default=0.0, help="outage threshold in dB (default 0)")
    s.add_argument("--trials", type=int, default=mc_sim.DEFAULT_TRIALS, help="Monte Carlo trials per point")
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True,
                   help="apply the noise-accumulation refinement (default on)")
    s.add_argument("--powers", type=_float_list, default=None,
                   help="per-hop power offsets in dB relative to the swept SNR (derived mode)")
    s.add_argument("--noise", type=_float_list, default=None, help="per-hop noise variances in dB (default 0)")
    s.add_argument("--workers", type=int, default=1, help="grid points evaluated concurrently")
    s.add_argument("--out", type=Path, required=True, help="CSV output path")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        start, stop, step = args.snr
        spec = SweepSpec(
            hops_list=args.hops, gain_sq=args.gain_sq, snr_start_db=start, snr_stop_db=stop,
            snr_step_db=step, gamma_th_db=args.threshold_db, trials=args.trials, seed=args.seed,
            refine=args.refine, outputs=args.out, power_offsets_db=args.powers, noise_db=args.noise,
        )
        if args.powers is not None and spec.gain_sq != DERIVED:
            raise ValueError("--powers only applies with --gain-sq derived")
        curve = run_sweep(spec, workers=max(1, args.workers))
        emit_csv(curve, args.out)
    except (ValueError, TypeError) as exc:
        print(f"afoutage: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"afoutage: accuracy error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"afoutage: {exc}", file=sys.stderr)
        return 4
    log.info("wrote %d rows to %s", len(curve.rows), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
