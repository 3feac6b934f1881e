"""Closed-form outage expression tests.

The combining CDF is checked against a hand-coded truncated exponential
series; the full expression is checked against a direct Monte Carlo with
independently drawn erlang gains.
"""

import numpy as np
import pytest

from vblastopt.outage import (
    OutageParams,
    exact_outage,
    high_snr_outage,
    mrc_outage_cdf,
    stream_orders,
)


def _series_cdf(k, x):
    """F_k(x) = 1 - e^-x sum_{j<k} x^j / j!, straight from the definition."""
    x = np.asarray(x, dtype=float)
    acc = np.zeros_like(x)
    term = np.ones_like(x)
    for j in range(k):
        acc += term
        term = term * x / (j + 1)
    return 1.0 - np.exp(-x) * acc


def test_combining_cdf_matches_series():
    x = np.logspace(-3, 1.5, 40)
    for k in range(1, 6):
        assert np.allclose(mrc_outage_cdf(k, x), _series_cdf(k, x), rtol=1e-12)


def test_combining_cdf_edges():
    assert mrc_outage_cdf(1, 0.0) == 0.0
    assert np.isclose(mrc_outage_cdf(1, 700.0), 1.0)
    assert np.all(np.diff(mrc_outage_cdf(3, np.linspace(0, 10, 50))) >= 0)


def test_stream_orders():
    assert np.array_equal(stream_orders(4, 2), [3, 4])
    assert np.array_equal(stream_orders(3, 3), [1, 2, 3])


def test_exact_outage_against_direct_sampling():
    rng = np.random.default_rng(17)
    draws = 300_000
    cases = [
        (2, 2, 1.0, 10.0, np.array([1.0, 1.0])),
        (3, 2, 0.8, 3.0, np.array([1.4, 0.6])),
        (4, 3, 1.2, 30.0, np.array([0.5, 1.0, 1.5])),
    ]
    for n, m, rate, gamma0, alphas in cases:
        p = exact_outage(OutageParams(n, m, rate, gamma0, alphas))
        orders = stream_orders(n, m)
        g = rng.gamma(shape=orders, size=(draws, m))
        caps = np.log1p(alphas * g * gamma0)
        p_hat = float((caps < rate).any(axis=1).mean())
        sigma = np.sqrt(p * (1 - p) / draws)
        assert abs(p_hat - p) < 4.0 * sigma + 1e-12


def test_exact_outage_limits():
    base = OutageParams(2, 2, 1.0, 10.0, np.ones(2))
    assert exact_outage(OutageParams(2, 2, 0.0, 10.0, np.ones(2))) == 0.0
    assert exact_outage(OutageParams(2, 2, 1.0, 10.0, np.array([2.0, 0.0]))) == 1.0
    p = exact_outage(base)
    assert 0.0 < p < 1.0
    # monotone: more SNR helps, higher target rate hurts
    assert exact_outage(OutageParams(2, 2, 1.0, 20.0, np.ones(2))) < p
    assert exact_outage(OutageParams(2, 2, 1.5, 10.0, np.ones(2))) > p


def test_outage_params_validation():
    with pytest.raises(ValueError):
        OutageParams(1, 2, 1.0, 10.0, np.ones(2))  # fewer rx than streams
    with pytest.raises(ValueError):
        OutageParams(2, 2, -1.0, 10.0, np.ones(2))
    with pytest.raises(ValueError):
        OutageParams(2, 2, 1.0, 0.0, np.ones(2))
    with pytest.raises(ValueError):
        OutageParams(2, 2, 1.0, 10.0, np.ones(3))  # wrong length
    with pytest.raises(ValueError):
        OutageParams(2, 2, 1.0, 10.0, np.array([-0.5, 2.5]))


def test_high_snr_expansion_tracks_exact():
    # push every per-stream argument under 0.05 and demand 10% agreement
    for gamma0_db in (22.0, 26.0, 30.0):
        gamma0 = 10.0 ** (gamma0_db / 10.0)
        params = OutageParams(2, 2, 1.0, gamma0, np.ones(2))
        approx = high_snr_outage(params)
        exact = exact_outage(params)
        z = (np.exp(1.0) - 1.0) / gamma0
        if z < 0.05:
            assert approx.valid
            assert abs(approx.value - exact) / exact < 0.10


def test_high_snr_flags_large_arguments():
    params = OutageParams(2, 2, 1.0, 1.0, np.ones(2))
    approx = high_snr_outage(params)
    assert not approx.valid
