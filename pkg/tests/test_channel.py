"""Channel sampling and detection-gain tests.

The reference for the gains is an explicit least-squares projection:
stream i is projected out of the span of the not-yet-detected columns
i+1..m, so the last detected stream keeps its full column norm.
"""

import numpy as np
import pytest

from vblastopt.channel import (
    per_stream_capacity,
    sample_channel,
    sample_channels,
    sic_gains,
    sic_gains_batch,
)


def _projection_gains(H):
    """Reference gains via lstsq projection, one stream at a time."""
    n, m = H.shape
    g = np.empty(m)
    for i in range(m):
        h = H[:, i]
        later = H[:, i + 1:]
        if later.shape[1]:
            coef, *_ = np.linalg.lstsq(later, h, rcond=None)
            resid = h - later @ coef
        else:
            resid = h
        g[i] = float(np.linalg.norm(resid) ** 2)
    return g


def test_sample_shapes_and_dtype():
    H = sample_channel(3, 2, seed=0)
    assert H.shape == (3, 2) and H.dtype == np.complex128
    Hs = sample_channels(4, 3, 17, seed=0)
    assert Hs.shape == (17, 4, 3) and Hs.dtype == np.complex128


def test_sampling_is_deterministic_per_seed_and_stream():
    a = sample_channels(2, 2, 5, seed=11, stream_id=3)
    b = sample_channels(2, 2, 5, seed=11, stream_id=3)
    c = sample_channels(2, 2, 5, seed=11, stream_id=4)
    d = sample_channels(2, 2, 5, seed=12, stream_id=3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_entry_statistics():
    # entries are (N + jN)/sqrt(2): zero mean, unit second moment
    H = sample_channels(4, 4, 20_000, seed=5).ravel()
    count = H.size
    assert abs(H.mean()) < 5.0 / np.sqrt(count)
    assert abs((np.abs(H) ** 2).mean() - 1.0) < 0.02
    assert abs(H.real.var() - 0.5) < 0.01
    assert abs(H.imag.var() - 0.5) < 0.01


def test_gains_match_projection_reference():
    for k, (n, m) in enumerate([(2, 2), (3, 2), (4, 3), (5, 5)]):
        H = sample_channels(n, m, 50, seed=100 + k)
        for c in range(50):
            got = sic_gains(H[c])
            ref = _projection_gains(H[c])
            assert np.allclose(got, ref, rtol=1e-9, atol=1e-12)


def test_gain_product_equals_gram_determinant():
    H = sample_channels(3, 3, 200, seed=7)
    for c in range(200):
        det = np.linalg.det(H[c].conj().T @ H[c]).real
        assert np.isclose(np.prod(sic_gains(H[c])), det, rtol=1e-9)


def test_last_stream_keeps_full_column_norm():
    H = sample_channel(4, 3, seed=9)
    g = sic_gains(H)
    assert np.isclose(g[-1], np.linalg.norm(H[:, -1]) ** 2, rtol=1e-12)


def test_active_subset_matches_column_selection():
    H = sample_channel(4, 4, seed=21)
    for active in [(0, 2), (1, 2, 3), (3,), (0, 1, 2, 3)]:
        got = sic_gains(H, active=active)
        ref = sic_gains(H[:, list(active)])
        assert got.shape == (len(active),)
        assert np.allclose(got, ref, rtol=1e-12)


def test_dependent_column_gets_zero_gain():
    rng = np.random.default_rng(3)
    h = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    H = np.stack([2.0 * h, h], axis=1)
    g = sic_gains(H)
    # stream 0 lies in the span of the later-detected stream 1
    assert g[0] == 0.0
    assert np.isclose(g[1], np.linalg.norm(h) ** 2, rtol=1e-12)


def test_batch_matches_per_channel_loop():
    H = sample_channels(3, 2, 64, seed=31)
    batch = sic_gains_batch(H)
    assert batch.shape == (64, 2)
    for c in range(64):
        assert np.allclose(batch[c], sic_gains(H[c]), rtol=1e-12)


def test_per_stream_capacity_formula():
    gains = np.array([2.0, 0.5])
    alphas = np.array([1.5, 0.5])
    got = per_stream_capacity(gains, alphas, 10.0)
    assert np.allclose(got, np.log1p(alphas * gains * 10.0), rtol=1e-15)
    # zero power carries zero rate
    assert per_stream_capacity(gains, np.array([0.0, 0.0]), 10.0).sum() == 0.0


def test_per_stream_capacity_rejects_bad_inputs():
    with pytest.raises(ValueError):
        per_stream_capacity(np.array([1.0]), np.array([-0.1]), 10.0)
    with pytest.raises(ValueError):
        per_stream_capacity(np.array([1.0]), np.array([1.0]), -1.0)
