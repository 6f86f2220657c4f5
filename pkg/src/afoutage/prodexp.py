"""Distribution of a product of i.i.d. unit-mean exponential random variables.

For ``Y = X_1 * ... * X_n`` with ``X_i ~ Exp(1)`` the CDF obeys

    F_n(x) = integral_0^inf exp(-t) F_{n-1}(x / t) dt,   F_1(x) = 1 - exp(-x).

Writing ``t = exp(u)`` and ``x = exp(v)`` turns this into a convolution on the
log axis, ``G_n(v) = integral w(u) G_{n-1}(v - u) du`` with the log-exponential
kernel ``w(u) = exp(u - exp(u))``.  Both ``w`` and ``G_1`` are analytic and
bounded in the strip ``|Im u| < pi/2``, so the trapezoidal rule on a uniform
grid converges geometrically in the step.  A uniform grid also means every
lower-order evaluation lands on the same lattice ``v - k*h``, so each level is
computed once for the whole lattice (one ``np.correlate`` per level) instead of
through nested adaptive calls.  The step is halved until two successive
estimates agree, and the difference is reported as the error estimate.

These are the Meijer-G instances ``G^{n,1}_{1,n+1}[x | 1; 1,...,1,0]`` (CDF)
and ``x^-1 G^{0,n}_{n,0}[1/x | 0,...,0; -]`` (PDF).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from afoutage import rng

__all__ = [
    "MAX_ORDER",
    "X_MAX",
    "CDF_TOL",
    "AccuracyError",
    "EvalResult",
    "cdf",
    "pdf",
    "sample_product",
    "iter_sample_product",
]

MAX_ORDER = 16
X_MAX = 1e4
CDF_TOL = 1e-8

# Kernel support on the log axis: mass of w below U_MIN is exp(U_MIN) and
# above U_MAX is exp(-exp(U_MAX)); both < 1e-18.
U_MIN = -42.0
U_MAX = 3.8

_H_START = 0.25
_H_MIN = 1.0 / 64.0
_TRUNCATION = math.exp(U_MIN) + math.exp(-math.exp(U_MAX))

# sample_product streams are disjoint from the channel streams used by mc_sim.
_SAMPLE_STREAM_BASE = 1 << 32


class AccuracyError(ArithmeticError):
    """Raised when a value cannot be delivered at the promised accuracy."""


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_error_estimate: float

    def __float__(self) -> float:
        return self.value


def check_order(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"order must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in [1, {MAX_ORDER}], got {n}")
    return n


@lru_cache(maxsize=32)
def _kernel(h: float) -> tuple[int, int, np.ndarray]:
    jmin = math.ceil(U_MIN / h)
    jmax = math.floor(U_MAX / h)
    u = np.arange(jmin, jmax + 1) * h
    w = h * np.exp(u - np.exp(u))
    w.setflags(write=False)
    return jmin, jmax, w


def _lattice(n: int, v: float, h: float, density: bool) -> float:
    """Trapezoidal evaluation of G_n(v) (or its v-derivative) with step h."""
    jmin, jmax, w = _kernel(h)
    k = np.arange((n - 1) * jmin, (n - 1) * jmax + 1)
    arg = v - k * h
    with np.errstate(over="ignore"):
        e = np.exp(arg)
        level = np.exp(arg - e) if density else -np.expm1(-e)
    for _ in range(n - 1):
        level = np.correlate(level, w, mode="valid")
    return float(level[0])


def _converged(n: int, v: float, density: bool, tol) -> tuple[float, float]:
    """Halve the step until successive estimates differ by at most ``tol(value)``."""
    h = _H_START
    prev = _lattice(n, v, h, density)
    while True:
        h /= 2.0
        cur = _lattice(n, v, h, density)
        # all lattice terms are positive, so roundoff scales with the value
        err = abs(cur - prev) + n * (_TRUNCATION + 8 * np.finfo(float).eps * abs(cur))
        if err <= tol(cur) or h <= _H_MIN:
            return cur, float(err)
        prev = cur


def cdf(n: int, x: float) -> EvalResult:
    """P(X_1 * ... * X_n <= x) for i.i.d. unit-mean exponentials.

    Raises ``AccuracyError`` for ``x > X_MAX`` or when the step-halving error
    estimate exceeds ``CDF_TOL``.
    """
    n = check_order(n)
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"cdf argument must be >= 0, got {x}")
    if x > X_MAX:
        raise AccuracyError(f"cdf argument {x:g} outside supported domain (0, {X_MAX:g}]")
    if x == 0.0:
        return EvalResult(0.0, 0.0)
    if n == 1:
        return EvalResult(-math.expm1(-x), 0.0)
    value, err = _converged(n, math.log(x), density=False, tol=lambda _: CDF_TOL)
    if err > CDF_TOL:
        raise AccuracyError(f"cdf({n}, {x:g}) error estimate {err:.3g} exceeds {CDF_TOL:g}")
    return EvalResult(min(max(value, 0.0), 1.0), err)


def pdf(n: int, x: float) -> EvalResult:
    """Density of the product of n unit-mean exponentials at x.

    The density diverges like ``(-ln x)^(n-1)`` at the origin, so ``x = 0``
    is rejected for ``n >= 2``.  The error bound is relative to ``max(1, value)``.
    """
    n = check_order(n)
    x = float(x)
    if n == 1:
        if not x >= 0.0:
            raise ValueError(f"pdf argument must be >= 0, got {x}")
        return EvalResult(math.exp(-x), 0.0)
    if not x > 0.0:
        raise ValueError(f"pdf argument must be > 0 for order {n}, got {x}")
    if x > X_MAX:
        raise AccuracyError(f"pdf argument {x:g} outside supported domain (0, {X_MAX:g}]")
    # g = x * f(x) is what the lattice computes; f's bound maps to max(x, g).
    g, err = _converged(n, math.log(x), density=True, tol=lambda g: CDF_TOL * max(x, abs(g)))
    value = max(g, 0.0) / x
    abs_err = err / x
    if abs_err > CDF_TOL * max(1.0, value):
        raise AccuracyError(f"pdf({n}, {x:g}) error estimate {abs_err:.3g} too large")
    return EvalResult(value, abs_err)


def iter_sample_product(n: int, count: int, seed: int, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """Yield seeded products in chunks; concatenation equals ``sample_product``."""
    n = check_order(n)
    if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    rng.check_seed(seed)
    for start in range(0, int(count), chunk):
        m = min(chunk, int(count) - start)
        prod = rng.exponentials(seed, _SAMPLE_STREAM_BASE, start, m)
        for i in range(1, n):
            prod *= rng.exponentials(seed, _SAMPLE_STREAM_BASE + i, start, m)
        yield prod


def sample_product(n: int, count: int, seed: int) -> np.ndarray:
    """``count`` independent draws of ``X_1 * ... * X_n``, deterministic in ``seed``."""
    return np.concatenate(list(iter_sample_product(n, count, seed)))
