"""Waterfilling power allocation over ZF-SIC stream gains.

Two levels of machinery live here. `water_level` / `clip_allocation` /
`conventional_wf` solve the classic single-pass problem for a fixed set
of gains. `fwf` (fractional waterfilling) additionally optimizes which
streams transmit at all: turning a stream off removes it from the
nulling projections, which raises every remaining gain, so the search
runs over all non-empty stream subsets, recomputes the SIC gains for
each, waterfills, and keeps the best total capacity.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .channel import per_stream_capacity, sic_gains, sic_gains_batch

# Capacities closer than this (nats) are treated as ties; ties prefer the
# larger active set, then the lexicographically smallest index tuple.
TIE_TOL = 1e-12


def water_level(gains: np.ndarray, gamma0: float, total_power: float) -> float:
    """Closed-form water level for a set of active streams.

    1/lambda = (P + sum_i 1/(gamma0 g_i)) / k for k active streams with
    total power budget P. Valid as the final level only when no stream
    would be driven negative at this level.
    """
    gains = np.asarray(gains, dtype=float)
    if gains.ndim != 1 or gains.size == 0:
        raise ValueError("need a non-empty 1-D gain vector")
    if np.any(gains <= 0):
        raise ValueError("water level needs strictly positive gains")
    if gamma0 <= 0 or total_power <= 0:
        raise ValueError("gamma0 and total_power must be positive")
    return (total_power + np.sum(1.0 / (gamma0 * gains))) / gains.size


def clip_allocation(level: float, gains: np.ndarray, gamma0: float) -> np.ndarray:
    """Power per stream at a given water level: (level - 1/(gamma0 g_i))_+ .

    Streams whose inverse effective SNR sits above the water line get
    exactly zero. The clipped powers do not in general sum to the budget
    that produced `level`; redistribution is the caller's job (see
    `conventional_wf` iterative mode).
    """
    gains = np.asarray(gains, dtype=float)
    if np.any(gains <= 0):
        raise ValueError("clip_allocation needs strictly positive gains")
    return np.maximum(level - 1.0 / (gamma0 * gains), 0.0)


def conventional_wf(
    gains: np.ndarray,
    gamma0: float,
    total_power: float,
    mode: str = "iterative",
) -> np.ndarray:
    """Waterfilling over fixed gains, without re-deriving them.

    mode="one-shot" computes the level once over all streams and clips;
    if clipping fires, the result over-spends the budget (the level was
    derived assuming every stream absorbs power). mode="iterative"
    re-solves the level over the surviving streams until all powers are
    positive, so the returned powers always sum to `total_power`.
    """
    gains = np.asarray(gains, dtype=float)
    if mode == "one-shot":
        return clip_allocation(water_level(gains, gamma0, total_power), gains, gamma0)
    if mode != "iterative":
        raise ValueError(f"unknown mode {mode!r}")
    # dead streams turn into infinite inverse SNRs and absorb nothing
    with np.errstate(divide="ignore"):
        inv_snr = 1.0 / (gamma0 * gains)
    alphas, _ = _exact_wf(inv_snr, total_power)
    return alphas


def _exact_wf(inv_snr: np.ndarray, total_power: float) -> tuple[np.ndarray, float]:
    """Exact waterfilling given per-stream inverse SNRs 1/(gamma0 g_i).

    Returns (alphas, level) with sum(alphas) == total_power and every
    alpha >= 0. Streams are activated strongest-first; the level over the
    j strongest is feasible iff it clears the j-th inverse SNR, and the
    feasible set is a prefix, so the largest feasible j is the answer.
    """
    order = np.argsort(inv_snr)
    c = inv_snr[order]
    j = np.arange(1, c.size + 1)
    levels = (total_power + np.cumsum(c)) / j
    feasible = levels > c
    jstar = int(feasible.sum())
    level = float(levels[jstar - 1])
    alphas_sorted = np.maximum(level - c, 0.0)
    alphas = np.empty_like(alphas_sorted)
    alphas[order] = alphas_sorted
    return alphas, level


def _exact_wf_batch(inv_snr: np.ndarray, total_power: float) -> np.ndarray:
    """Batched `_exact_wf`: inv_snr (..., k) -> powers (..., k).

    Infinite inverse SNRs (zero gains) are handled by the same machinery:
    they sort last and can never be feasible, so they get exact zeros.
    """
    order = np.argsort(inv_snr, axis=-1)
    c = np.take_along_axis(inv_snr, order, axis=-1)
    j = np.arange(1, c.shape[-1] + 1)
    levels = (total_power + np.cumsum(c, axis=-1)) / j
    with np.errstate(invalid="ignore"):
        feasible = levels > c
    jstar = feasible.sum(axis=-1)
    level = np.take_along_axis(levels, (jstar - 1)[..., None], axis=-1)
    alphas_sorted = np.maximum(level - c, 0.0)
    alphas_sorted[~np.isfinite(alphas_sorted)] = 0.0
    alphas = np.empty_like(alphas_sorted)
    np.put_along_axis(alphas, order, alphas_sorted, axis=-1)
    return alphas


def enumerate_subsets(m: int) -> list[tuple[int, ...]]:
    """All non-empty stream subsets: full set first, then smaller sizes,
    lexicographic within each size. This is the evaluation order used by
    `fwf` and by the early-exit strategy variant."""
    subsets: list[tuple[int, ...]] = []
    for size in range(m, 0, -1):
        subsets.extend(combinations(range(m), size))
    return subsets


@dataclass(frozen=True)
class AllocationResult:
    """Outcome of a power/rate optimization on one channel draw.

    alphas and rates have one entry per physical stream (length m);
    streams outside `active` hold exact zeros. `degenerate` marks an
    all-zero channel where no positive-rate allocation exists and the
    uniform fallback is returned.
    """

    active: tuple[int, ...]
    alphas: np.ndarray
    rates: np.ndarray
    total_capacity: float
    degenerate: bool = False


def _better(
    cap_a: float, sub_a: tuple[int, ...], cap_b: float, sub_b: tuple[int, ...]
) -> bool:
    """True when candidate a beats incumbent b under the tie-break rules."""
    if cap_a > cap_b + TIE_TOL:
        return True
    if cap_a < cap_b - TIE_TOL:
        return False
    if len(sub_a) != len(sub_b):
        return len(sub_a) > len(sub_b)
    return sub_a < sub_b


def solve_subset(
    H: np.ndarray, subset: tuple[int, ...], gamma0: float, total_power: float
) -> tuple[float, np.ndarray] | None:
    """Exact waterfilling over one candidate support.

    Recomputes the SIC gains with only `subset` transmitting and solves
    the waterfilling subproblem over the full budget. Returns
    (capacity, powers-on-subset), or None when the subset contains a
    dead or dependent column: such a stream wastes budget, and the
    subset without it is enumerated separately with gains at least as
    good, so it can never be uniquely optimal.
    """
    g = sic_gains(H, subset)
    if np.any(g == 0.0):
        return None
    alphas, _ = _exact_wf(1.0 / (gamma0 * g), total_power)
    cap = float(np.sum(per_stream_capacity(g, alphas, gamma0)))
    return cap, alphas


def fwf(H: np.ndarray, gamma0: float, total_power: float | None = None) -> AllocationResult:
    """Fractional waterfilling: jointly pick the active streams and powers.

    Every non-empty subset of streams is a candidate support. For each,
    the SIC gains are recomputed with only those streams transmitting,
    the waterfilling subproblem is solved exactly over the full budget,
    and the candidate capacity is the resulting sum rate. The best
    candidate wins; capacity ties go to the larger support, then to the
    lexicographically smallest index set. The winning powers always lie
    on the simplex sum(alpha) == total_power.

    Parameters
    ----------
    H : numpy.ndarray
        Channel matrix, shape (n, m).
    gamma0 : float
        Average SNR (linear).
    total_power : float, optional
        Power budget; defaults to m (unit average power per stream).
    """
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2:
        raise ValueError("H must be a 2-D matrix")
    m = H.shape[1]
    if gamma0 <= 0:
        raise ValueError("gamma0 must be positive")
    if total_power is None:
        total_power = float(m)
    if total_power <= 0:
        raise ValueError("total_power must be positive")

    best: tuple[float, tuple[int, ...], np.ndarray] | None = None
    for subset in enumerate_subsets(m):
        solved = solve_subset(H, subset, gamma0, total_power)
        if solved is None:
            continue
        cap, alphas = solved
        if best is None or _better(cap, subset, best[0], best[1]):
            best = (cap, subset, alphas)

    if best is None:
        # All-zero channel: nothing can carry rate. Report the uniform
        # split so downstream power accounting still balances.
        return AllocationResult(
            tuple(range(m)), np.full(m, total_power / m), np.zeros(m), 0.0, True
        )
    cap, subset, alphas = best
    return _assemble(H, subset, alphas, cap, gamma0, m)


def _assemble(
    H: np.ndarray,
    subset: tuple[int, ...],
    alphas: np.ndarray,
    cap: float,
    gamma0: float,
    m: int,
) -> AllocationResult:
    full_alphas = np.zeros(m)
    full_rates = np.zeros(m)
    g = sic_gains(H, subset)
    full_alphas[list(subset)] = alphas
    full_rates[list(subset)] = per_stream_capacity(g, alphas, gamma0)
    return AllocationResult(subset, full_alphas, full_rates, cap)


def subset_capacities_batch(
    H: np.ndarray, gamma0: float, total_power: float | None = None
) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Waterfilled capacity of every stream subset, over a channel batch.

    Parameters
    ----------
    H : numpy.ndarray
        Channel batch, shape (..., n, m).

    Returns
    -------
    (capacities, subsets)
        capacities has shape (..., S) with S = 2^m - 1 columns in the
        order given by `enumerate_subsets(m)`; entry s is the exact
        waterfilling capacity when only subset s transmits. The maximum
        over columns is the fractional-waterfilling capacity.
    """
    H = np.asarray(H, dtype=np.complex128)
    m = H.shape[-1]
    if total_power is None:
        total_power = float(m)
    subsets = enumerate_subsets(m)
    caps = np.empty(H.shape[:-2] + (len(subsets),))
    for s, subset in enumerate(subsets):
        g = sic_gains_batch(H, subset)
        with np.errstate(divide="ignore"):
            inv_snr = np.where(g > 0.0, 1.0 / (gamma0 * g), np.inf)
        alphas = _exact_wf_batch(inv_snr, total_power)
        caps[..., s] = np.log1p(alphas * gamma0 * g).sum(axis=-1)
    return caps, subsets
