"""Rayleigh MIMO channel sampling and ZF-SIC per-stream gains.

Streams are detected in index order: stream 0 first, stream m-1 last.
While stream i is being detected, the later streams i+1..m-1 are still
untouched interference, so the zero-forcing front end projects column i
onto the orthogonal complement of the span of the later active columns.
The squared norm of that residual is the effective power gain of the
stream after interference cancellation of the earlier ones.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

# Residual norms below RANK_TOL times the largest column norm are treated
# as exact rank deficiency (zero gain) rather than noise-level leftovers.
RANK_TOL = 1e-12


def _generator(seed: int, stream_id: int = 0) -> Generator:
    """Counter-based generator: the (seed, stream_id) pair is the whole state."""
    key = np.array([seed, stream_id], dtype=np.uint64)
    return Generator(Philox(key=key))


def sample_channel(n: int, m: int, seed: int, stream_id: int = 0) -> np.ndarray:
    """Draw one n-by-m channel matrix with i.i.d. CN(0, 1) entries.

    Parameters
    ----------
    n : int
        Receive antennas (rows). Must satisfy n >= m.
    m : int
        Transmit antennas / streams (columns).
    seed, stream_id : int
        Counter-based RNG key. Identical (seed, stream_id) pairs reproduce
        the identical matrix on any platform; distinct pairs give
        independent draws.

    Returns
    -------
    numpy.ndarray
        Complex (n, m) matrix; each entry has unit variance split evenly
        between real and imaginary parts.
    """
    return sample_channels(n, m, 1, seed, stream_id)[0]


def sample_channels(
    n: int, m: int, count: int, seed: int, stream_id: int = 0
) -> np.ndarray:
    """Draw a batch of `count` i.i.d. channel matrices, shape (count, n, m)."""
    if n < m:
        raise ValueError(f"need n >= m, got n={n}, m={m}")
    if m < 1 or count < 1:
        raise ValueError("m and count must be positive")
    rng = _generator(seed, stream_id)
    parts = rng.standard_normal((count, n, m, 2))
    return (parts[..., 0] + 1j * parts[..., 1]) / np.sqrt(2.0)


def sic_gains(H: np.ndarray, active: tuple[int, ...] | None = None) -> np.ndarray:
    """Per-stream power gains of ZF-SIC detection over the active streams.

    Parameters
    ----------
    H : numpy.ndarray
        Channel matrix, shape (n, m).
    active : tuple of int, optional
        Strictly increasing column indices of the streams actually
        transmitting. Defaults to all m streams. Turned-off streams are
        excluded from both transmission and the nulling projections.

    Returns
    -------
    numpy.ndarray
        Gains g_k >= 0, one per active stream in detection order. The
        last active stream sees no interference, so its gain is the full
        squared column norm; earlier streams lose the part of their
        column lying in the span of the later active columns. Columns
        linearly dependent on later ones get an exact zero.
    """
    H = np.asarray(H)
    if H.ndim != 2:
        raise ValueError("H must be a 2-D matrix")
    return sic_gains_batch(H[None, :, :], active)[0]


def sic_gains_batch(
    H: np.ndarray, active: tuple[int, ...] | None = None
) -> np.ndarray:
    """Vectorized `sic_gains` over a batch of channels, shape (..., n, m).

    Returns gains of shape (..., k) where k = len(active). Uses modified
    Gram-Schmidt with one re-orthogonalization pass so the residuals stay
    accurate on ill-conditioned draws.
    """
    H = np.asarray(H, dtype=np.complex128)
    n, m = H.shape[-2], H.shape[-1]
    if n < m:
        raise ValueError(f"need n >= m, got n={n}, m={m}")
    if active is None:
        cols = H
        k = m
    else:
        active = tuple(active)
        if not active:
            raise ValueError("active set must be non-empty")
        if list(active) != sorted(set(active)) or active[0] < 0 or active[-1] >= m:
            raise ValueError(f"active must be strictly increasing within 0..{m-1}")
        cols = H[..., list(active)]
        k = len(active)

    sq_norms = (cols.real**2 + cols.imag**2).sum(axis=-2)
    # Rank threshold is relative to the largest column in each draw.
    thresh = RANK_TOL * np.sqrt(sq_norms.max(axis=-1))

    gains = np.empty(H.shape[:-2] + (k,))
    basis: list[np.ndarray] = []  # orthonormal, zeroed where rank-deficient
    for i in range(k - 1, -1, -1):
        v = cols[..., :, i].copy()
        for _ in range(2):  # second pass restores orthogonality lost to cancellation
            for q in basis:
                coef = (np.conj(q) * v).sum(axis=-1, keepdims=True)
                v = v - coef * q
        res = np.sqrt((v.real**2 + v.imag**2).sum(axis=-1))
        dependent = res <= thresh
        gains[..., i] = np.where(dependent, 0.0, res**2)
        if i > 0:
            # A dependent column adds nothing to the span of later columns.
            safe = np.where(dependent, 1.0, res)
            q_new = np.where(dependent[..., None], 0.0, v / safe[..., None])
            basis.append(q_new)
    return gains


def per_stream_capacity(
    gains: np.ndarray, alphas: np.ndarray, gamma0: float
) -> np.ndarray:
    """Capacity ln(1 + alpha * g * gamma0) in nats, elementwise.

    `gains` and `alphas` broadcast against each other; `gamma0` is the
    average SNR in linear units.
    """
    gains = np.asarray(gains)
    alphas = np.asarray(alphas)
    if np.any(gains < 0):
        raise ValueError("gains must be non-negative")
    if np.any(alphas < 0):
        raise ValueError("power fractions must be non-negative")
    if gamma0 <= 0:
        raise ValueError("gamma0 must be positive")
    return np.log1p(alphas * gains * gamma0)
