"""Closed-form outage probability for fixed-rate ZF-SIC streams.

After interference cancellation, stream i of an n-by-m system sees an
effective channel equal in law to (n - m + i + 1)-branch maximum ratio
combining (0-based i), so its gain is Gamma(n - m + i + 1, 1). A stream
carrying rate R nats at power fraction alpha_i is in outage when
ln(1 + alpha_i g_i gamma0) < R, and the system fails if any active
stream fails. Independence across streams turns the system outage into
one minus a product of per-stream survival terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammainc


@dataclass(frozen=True)
class OutageParams:
    """Fixed-rate outage problem: (n, m) antennas, R nats/stream, SNR, powers."""

    n: int
    m: int
    rate_nats: float
    gamma0: float
    alphas: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < self.m or self.m < 1:
            raise ValueError("need n >= m >= 1")
        if self.rate_nats < 0:
            raise ValueError("rate must be non-negative")
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be positive")
        if len(self.alphas) != self.m:
            raise ValueError("one power fraction per stream required")
        if any(a < 0 for a in self.alphas):
            raise ValueError("power fractions must be non-negative")


def mrc_outage_cdf(k: int, x) -> np.ndarray | float:
    """CDF of a Gamma(k, 1) gain: P{g < x} for k-branch MRC.

    Evaluated as the regularized lower incomplete gamma function, which
    is numerically stable in both the deep-tail (x -> 0) and bulk
    regimes; the naive 1 - exp(-x) * sum form cancels catastrophically
    for small x.
    """
    if k < 1 or int(k) != k:
        raise ValueError("diversity order k must be a positive integer")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("gain threshold must be non-negative")
    out = gammainc(int(k), x)
    return float(out) if out.ndim == 0 else out


def stream_orders(n: int, m: int) -> np.ndarray:
    """Diversity order of each stream in detection order: n-m+1, ..., n."""
    return np.arange(n - m + 1, n + 1)


def exact_outage(params: OutageParams) -> float:
    """System outage probability 1 - prod_i (1 - F_{k_i}(z_i)).

    z_i = (e^R - 1) / (alpha_i gamma0) is the gain threshold of stream i.
    A stream assigned zero power cannot carry a positive rate, so any
    zero alpha with R > 0 forces outage probability one.
    """
    if params.rate_nats == 0.0:
        return 0.0
    alphas = np.asarray(params.alphas)
    if np.any(alphas == 0.0):
        return 1.0
    need = math.expm1(params.rate_nats)
    orders = stream_orders(params.n, params.m)
    survive = 1.0
    for k, a in zip(orders, alphas):
        survive *= 1.0 - mrc_outage_cdf(int(k), need / (a * params.gamma0))
    return 1.0 - survive


@dataclass(frozen=True)
class HighSnrOutage:
    """Leading-order outage value plus a validity flag for the expansion."""

    value: float
    valid: bool
    stream_terms: tuple[float, ...] = field(repr=False, default=())


def high_snr_outage(params: OutageParams, validity_cut: float = 0.1) -> HighSnrOutage:
    """High-SNR outage approximation with per-stream terms z_i^{k_i} / k_i!.

    Keeps only the leading term of each stream's CDF. `valid` is False
    when any threshold z_i exceeds `validity_cut`, i.e. the expansion is
    being used outside its accuracy window; the value is still returned.
    """
    if params.rate_nats == 0.0:
        return HighSnrOutage(0.0, True, tuple(0.0 for _ in range(params.m)))
    alphas = np.asarray(params.alphas)
    if np.any(alphas == 0.0):
        return HighSnrOutage(1.0, False, tuple())
    need = math.expm1(params.rate_nats)
    orders = stream_orders(params.n, params.m)
    z = need / (alphas * params.gamma0)
    terms = z**orders / np.array([math.factorial(int(k)) for k in orders])
    value = 1.0 - np.prod(1.0 - terms)
    return HighSnrOutage(float(value), bool(np.all(z < validity_cut)), tuple(terms))
