"""Waterfilling and subset-search allocator tests.

Hand-computed level/clip values anchor the scalar pieces; the search is
checked against a brute-force simplex grid and against the KKT
conditions of the exact single-set problem.
"""

import numpy as np
import pytest

from vblastopt.channel import sample_channels, sic_gains
from vblastopt.waterfill import (
    TIE_TOL,
    AllocationResult,
    _better,
    clip_allocation,
    conventional_wf,
    enumerate_subsets,
    fwf,
    solve_subset,
    subset_capacities_batch,
    water_level,
)


def test_water_level_hand_value():
    # (2 + 1/20 + 1/10) / 2
    assert np.isclose(water_level(np.array([2.0, 1.0]), 10.0, 2.0), 1.075, rtol=1e-12)


def test_clip_keeps_positive_powers():
    alphas = clip_allocation(1.075, np.array([2.0, 1.0]), 10.0)
    assert np.allclose(alphas, [1.075 - 0.05, 1.075 - 0.1], rtol=1e-12)
    assert np.isclose(alphas.sum(), 2.0, rtol=1e-12)


def test_one_shot_clipping_overspends():
    # weak stream forced to zero; the survivors keep the stale level
    gains = np.array([10.0, 0.01])
    assert np.isclose(water_level(gains, 1.0, 2.0), 51.05, rtol=1e-12)
    alphas = conventional_wf(gains, 1.0, 2.0, mode="one-shot")
    assert np.allclose(alphas, [50.95, 0.0], rtol=1e-12)
    assert alphas.sum() > 2.0  # the one-shot form does not re-spread the budget


def test_iterative_mode_respects_budget():
    gains = np.array([10.0, 0.01])
    alphas = conventional_wf(gains, 1.0, 2.0, mode="iterative")
    assert np.allclose(alphas, [2.0, 0.0], rtol=1e-12)
    assert np.isclose(alphas.sum(), 2.0, rtol=1e-12)


def test_modes_agree_without_clipping():
    H = sample_channels(2, 2, 40, seed=51)
    for c in range(40):
        g = sic_gains(H[c])
        one = conventional_wf(g, 50.0, 2.0, mode="one-shot")
        it = conventional_wf(g, 50.0, 2.0, mode="iterative")
        if np.all(one > 0):
            assert np.allclose(one, it, rtol=1e-12)


def test_iterative_satisfies_kkt():
    rng = np.random.default_rng(77)
    for _ in range(200):
        m = rng.integers(2, 5)
        g = rng.gamma(shape=2.0, size=m)
        if rng.random() < 0.3:
            g[rng.integers(m)] = 0.0  # dead stream must get nothing
        gamma0 = float(rng.uniform(0.05, 20.0))
        total = float(rng.uniform(0.5, 4.0))
        alphas = conventional_wf(g, gamma0, total, mode="iterative")
        assert np.isclose(alphas.sum(), total, rtol=1e-9)
        assert np.all(alphas >= 0)
        inv = np.where(g > 0, 1.0 / (gamma0 * np.where(g > 0, g, 1.0)), np.inf)
        active = alphas > 0
        # active streams share one water height, inactive sit above it
        level = float((alphas[active] + inv[active]).mean())
        assert np.allclose(alphas[active] + inv[active], level, rtol=1e-9)
        assert np.all(inv[~active] >= level - 1e-9)


def test_enumerate_subsets_order():
    assert enumerate_subsets(2) == [(0, 1), (0,), (1,)]
    subs3 = enumerate_subsets(3)
    assert subs3[0] == (0, 1, 2)
    assert subs3 == [(0, 1, 2), (0, 1), (0, 2), (1, 2), (0,), (1,), (2,)]
    assert len(enumerate_subsets(4)) == 15


def test_better_tie_breaking():
    # clear capacity win
    assert _better(1.0, (0,), 0.9, (0, 1))
    # tie within tolerance: larger support wins
    assert _better(1.0, (0, 1), 1.0 + TIE_TOL / 2, (0,))
    assert not _better(1.0, (0,), 1.0, (0, 1))
    # same size: lexicographically smaller support wins
    assert _better(1.0, (0, 2), 1.0, (1, 2))


def test_search_beats_brute_force_grid():
    step = 0.01
    for seed, m, gamma0 in [(61, 2, 0.3), (62, 2, 3.0), (63, 3, 0.3), (64, 3, 3.0)]:
        H = sample_channels(m, m, 20, seed=seed)
        grids = {}
        for c in range(20):
            best_grid = 0.0
            for subset in enumerate_subsets(m):
                k = len(subset)
                g = sic_gains(H[c], active=subset)
                if np.any(g <= 0):
                    continue
                if k not in grids:
                    steps = int(round(m / step))
                    if k == 1:
                        pts = np.array([[float(m)]])
                    elif k == 2:
                        a = np.arange(steps + 1) * step
                        pts = np.stack([a, m - a], axis=1)
                    else:
                        a = np.arange(steps + 1) * step
                        i, j = np.meshgrid(a, a, indexing="ij")
                        keep = i + j <= m + 1e-12
                        pts = np.stack(
                            [i[keep], j[keep], m - i[keep] - j[keep]], axis=1
                        )
                    grids[k] = pts
                caps = np.log1p(grids[k] * (gamma0 * g)).sum(axis=1)
                best_grid = max(best_grid, float(caps.max()))
            result = fwf(H[c], gamma0)
            assert result.total_capacity >= best_grid - 1e-9


def test_search_result_structure():
    H = sample_channels(2, 2, 30, seed=71)
    for c in range(30):
        r = fwf(H[c], 2.0)
        assert isinstance(r, AllocationResult)
        assert r.alphas.shape == (2,) and r.rates.shape == (2,)
        assert np.isclose(r.alphas.sum(), 2.0, rtol=1e-9)
        off = [i for i in range(2) if i not in r.active]
        assert np.all(r.alphas[off] == 0.0) and np.all(r.rates[off] == 0.0)
        # ties prefer the larger support, so an active stream may still
        # end at zero power; at least one must carry the budget
        assert np.all(r.alphas >= 0.0) and r.alphas.max() > 0
        assert np.isclose(r.rates.sum(), r.total_capacity, rtol=1e-12)
        assert not r.degenerate


def test_search_capacity_monotone_in_snr():
    H = sample_channels(3, 3, 10, seed=81)
    for c in range(10):
        caps = [fwf(H[c], g).total_capacity for g in (0.1, 1.0, 10.0, 100.0)]
        assert np.all(np.diff(caps) > 0)


def test_degenerate_channel_flagged():
    r = fwf(np.zeros((2, 2), dtype=complex), 10.0)
    assert r.degenerate
    assert np.allclose(r.alphas, 1.0)
    assert r.total_capacity == 0.0 and np.all(r.rates == 0.0)


def test_custom_budget():
    H = sample_channels(2, 2, 5, seed=91)
    for c in range(5):
        r = fwf(H[c], 1.0, total_power=0.5)
        assert np.isclose(r.alphas.sum(), 0.5, rtol=1e-9)


def test_solve_subset_matches_batch():
    H = sample_channels(2, 2, 40, seed=95)
    caps, subsets = subset_capacities_batch(H, 3.0)
    assert caps.shape == (40, 3)
    assert subsets == enumerate_subsets(2)
    for c in range(40):
        for s, subset in enumerate(subsets):
            solved = solve_subset(H[c], subset, 3.0, 2.0)
            if solved is not None:
                assert np.isclose(caps[c, s], solved[0], rtol=1e-12)


def test_batch_argmax_agrees_with_search():
    H = sample_channels(3, 3, 25, seed=97)
    caps, subsets = subset_capacities_batch(H, 1.5)
    for c in range(25):
        r = fwf(H[c], 1.5)
        assert np.isclose(caps[c].max(), r.total_capacity, rtol=1e-12)


def test_input_validation():
    with pytest.raises(ValueError):
        water_level(np.array([1.0, -1.0]), 10.0, 2.0)
    with pytest.raises(ValueError):
        conventional_wf(np.array([1.0, 1.0]), 10.0, 2.0, mode="bogus")
    with pytest.raises(ValueError):
        fwf(sample_channels(2, 2, 1, seed=1)[0], -1.0)
