"""Monte Carlo estimation of outage probability and mean capacity.

Determinism contract: the channel draw for trial t at sweep point gi is
a pure function of (master_seed, gi, t), realized with a counter-based
generator keyed per fixed-size trial block. Results are reduced in block
order, so curves are bit-identical for any number of worker threads and
any block scheduling. All strategies within a run see the same draws
(common random numbers), which makes paired comparisons exact.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .channel import sample_channels, sic_gains_batch
from .strategies import (
    OUTAGE_RULE,
    avg_ergodic_allocation,
    average_opa,
    validate_strategy,
)
from .waterfill import subset_capacities_batch

# Trials per RNG block. Part of the determinism contract: changing it
# changes which draw belongs to which trial, so it is a constant, not a
# tuning knob.
BLOCK_TRIALS = 16384

# Two-sided 95% normal quantile for the Wilson score interval.
Z95 = 1.959963984540054

# Points with fewer outage events than this are flagged unreliable.
MIN_EVENTS = 20


@dataclass(frozen=True)
class SimConfig:
    """One sweep: system size, SNR grid (dB), per-stream rate, trial budget."""

    n: int
    m: int
    gamma0_db_grid: tuple[float, ...]
    rate_nats: float
    trials: int
    master_seed: int
    strategies: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.n < self.m or self.m < 1:
            raise ValueError("need n >= m >= 1")
        if self.rate_nats <= 0:
            raise ValueError("rate must be positive")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not self.gamma0_db_grid:
            raise ValueError("SNR grid must be non-empty")
        diffs = np.diff(self.gamma0_db_grid)
        if diffs.size and not np.all(diffs > 0):
            raise ValueError("SNR grid must be strictly increasing")
        if not self.strategies:
            raise ValueError("need at least one strategy")
        for tag in self.strategies:
            validate_strategy(tag)
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in 64 bits")


class StrategyOutcome(NamedTuple):
    """Per-trial totals for one strategy on one block of draws."""

    total_capacity: np.ndarray  # (trials,) nats
    in_outage: np.ndarray  # (trials,) bool


def wilson_interval(events: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1 or events < 0 or events > trials:
        raise ValueError("need 0 <= events <= trials, trials >= 1")
    p = events / trials
    z2 = Z95 * Z95
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (
        Z95
        * np.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class CurvePoint:
    gamma0_db: float
    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    events: int
    reliable: bool


@dataclass(frozen=True)
class OutageCurve:
    """Estimated outage probability versus SNR for one strategy."""

    strategy: str
    points: tuple[CurvePoint, ...]

    @property
    def gamma0_db(self) -> np.ndarray:
        return np.array([p.gamma0_db for p in self.points])

    @property
    def p_hat(self) -> np.ndarray:
        return np.array([p.p_hat for p in self.points])


@dataclass(frozen=True)
class ErgodicPoint:
    gamma0_db: float
    mean_capacity: float
    std_err: float
    trials: int


def fixed_allocations(
    cfg: SimConfig, gamma0: float
) -> dict[str, np.ndarray]:
    """Channel-independent power vectors needed by the configured strategies."""
    allocs: dict[str, np.ndarray] = {}
    if "uniform" in cfg.strategies:
        allocs["uniform"] = np.ones(cfg.m)
    if "avg-opa" in cfg.strategies:
        allocs["avg-opa"] = average_opa(cfg.n, cfg.m, gamma0, cfg.rate_nats)
    if "ergodic" in cfg.strategies:
        allocs["ergodic"] = avg_ergodic_allocation(cfg.n, cfg.m, gamma0)
    return allocs


def block_outcomes(
    H: np.ndarray,
    gamma0: float,
    rate_nats: float,
    strategies: tuple[str, ...],
    allocs: dict[str, np.ndarray],
) -> dict[str, StrategyOutcome]:
    """Evaluate every requested strategy on one block of shared draws.

    Fixed-power strategies are in outage when any stream's capacity
    drops below the per-stream rate; rate-adaptive strategies when the
    total capacity drops below m * rate_nats.
    """
    m = H.shape[-1]
    target = m * rate_nats
    out: dict[str, StrategyOutcome] = {}

    gains = sic_gains_batch(H)
    need_sum = [t for t in strategies if OUTAGE_RULE[t] == "sum"]
    c_ora = None
    if set(need_sum) - {"opra", "cor2-1", "cor2-3"}:
        c_ora = np.log1p(gains * gamma0).sum(axis=-1)
    caps = None
    if set(need_sum) - {"ora"}:
        caps, _ = subset_capacities_batch(H, gamma0)
        c_fwf = caps.max(axis=-1)

    for tag in strategies:
        if OUTAGE_RULE[tag] == "stream":
            per_stream = np.log1p(allocs[tag][None, :] * gains * gamma0)
            out[tag] = StrategyOutcome(
                per_stream.sum(axis=-1), (per_stream < rate_nats).any(axis=-1)
            )
            continue
        if tag == "ora":
            total = c_ora
        elif tag in ("opra", "cor2-1"):
            total = c_fwf
        elif tag == "cor2-2":
            total = np.where(c_ora >= target, c_ora, c_fwf)
        elif tag == "cor2-3":
            # Early exit takes the first subset meeting the target in
            # enumeration order, not necessarily the best one.
            hit = caps >= target
            first = hit.argmax(axis=-1)
            first_cap = np.take_along_axis(caps, first[:, None], axis=-1)[:, 0]
            total = np.where(hit.any(axis=-1), first_cap, c_fwf)
        else:  # cor2-4
            total = np.where((c_ora < target) & (c_fwf >= target), c_fwf, c_ora)
        out[tag] = StrategyOutcome(total, total < target)
    return out


def _blocks(trials: int) -> list[tuple[int, int]]:
    """(block index, trials in block) covering `trials` in fixed-size blocks."""
    spans = []
    done = 0
    b = 0
    while done < trials:
        count = min(BLOCK_TRIALS, trials - done)
        spans.append((b, count))
        done += count
        b += 1
    return spans


def _draw_block(cfg: SimConfig, point_idx: int, block_idx: int, count: int) -> np.ndarray:
    # 64-bit sub-stream id: sweep-point index in the high half, block
    # index in the low half. Trial identity is (seed, point, trial).
    stream_id = (point_idx << 32) | block_idx
    return sample_channels(cfg.n, cfg.m, count, cfg.master_seed, stream_id)


def run_outage_sweep(cfg: SimConfig, threads: int = 1) -> list[OutageCurve]:
    """Estimate outage probability curves for every configured strategy.

    Returns one curve per strategy, in the order given by
    `cfg.strategies`. Identical configs give bit-identical curves for
    any `threads`.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    counts = {tag: [] for tag in cfg.strategies}
    for gi, gdb in enumerate(cfg.gamma0_db_grid):
        gamma0 = 10.0 ** (gdb / 10.0)
        allocs = fixed_allocations(cfg, gamma0)

        def work(span: tuple[int, int]) -> dict[str, int]:
            b, cnt = span
            H = _draw_block(cfg, gi, b, cnt)
            outcomes = block_outcomes(
                H, gamma0, cfg.rate_nats, cfg.strategies, allocs
            )
            return {tag: int(o.in_outage.sum()) for tag, o in outcomes.items()}

        spans = _blocks(cfg.trials)
        if threads == 1:
            partials = [work(s) for s in spans]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                partials = list(pool.map(work, spans))
        for tag in cfg.strategies:
            counts[tag].append(sum(p[tag] for p in partials))

    curves = []
    for tag in cfg.strategies:
        points = []
        for gdb, events in zip(cfg.gamma0_db_grid, counts[tag]):
            lo, hi = wilson_interval(events, cfg.trials)
            points.append(
                CurvePoint(
                    gamma0_db=gdb,
                    p_hat=events / cfg.trials,
                    ci_low=lo,
                    ci_high=hi,
                    trials=cfg.trials,
                    events=events,
                    reliable=events >= MIN_EVENTS,
                )
            )
        curves.append(OutageCurve(tag, tuple(points)))
    return curves


def run_ergodic_sweep(
    cfg: SimConfig,
    allocation: np.ndarray | Callable[[float], np.ndarray],
    threads: int = 1,
) -> list[ErgodicPoint]:
    """Mean total capacity of a fixed power allocation over the SNR grid.

    `allocation` is either one power vector used at every point or a
    callable mapping linear SNR to a vector (for SNR-dependent but still
    channel-independent schemes). Standard error is the sample standard
    deviation over trials divided by sqrt(trials).
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    results = []
    for gi, gdb in enumerate(cfg.gamma0_db_grid):
        gamma0 = 10.0 ** (gdb / 10.0)
        alphas = allocation(gamma0) if callable(allocation) else np.asarray(allocation)
        if alphas.shape != (cfg.m,) or np.any(alphas < 0):
            raise ValueError("allocation must be m non-negative powers")

        def work(span: tuple[int, int]) -> tuple[float, float]:
            b, cnt = span
            H = _draw_block(cfg, gi, b, cnt)
            gains = sic_gains_batch(H)
            c = np.log1p(alphas[None, :] * gains * gamma0).sum(axis=-1)
            return float(c.sum()), float((c * c).sum())

        spans = _blocks(cfg.trials)
        if threads == 1:
            partials = [work(s) for s in spans]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                partials = list(pool.map(work, spans))
        # Reduce in block order so the float sums are reproducible.
        s1 = 0.0
        s2 = 0.0
        for a, b2 in partials:
            s1 += a
            s2 += b2
        nt = cfg.trials
        mean = s1 / nt
        var = max(s2 - nt * mean * mean, 0.0) / max(nt - 1, 1)
        results.append(ErgodicPoint(gdb, mean, float(np.sqrt(var / nt)), nt))
    return results


CURVE_CSV_HEADER = "gamma0_db,p_out,ci_low,ci_high,trials,reliable"

ERGODIC_CSV_HEADER = "gamma0_db,mean_capacity_nats,std_err,trials"


def curve_csv(curve: OutageCurve) -> str:
    """Serialize an outage curve as delimited text.

    One line per grid point under the fixed header, floats written with
    repr so a reread recovers the exact values. The reliability flag is
    rendered as lowercase true/false.
    """
    lines = [CURVE_CSV_HEADER]
    for pt in curve.points:
        flag = "true" if pt.reliable else "false"
        lines.append(
            f"{float(pt.gamma0_db)!r},{float(pt.p_hat)!r},{float(pt.ci_low)!r},"
            f"{float(pt.ci_high)!r},{pt.trials},{flag}"
        )
    return "\n".join(lines) + "\n"


def ergodic_csv(points: list[ErgodicPoint]) -> str:
    """Serialize an ergodic capacity sweep as delimited text."""
    lines = [ERGODIC_CSV_HEADER]
    for pt in points:
        lines.append(
            f"{float(pt.gamma0_db)!r},{float(pt.mean_capacity)!r},"
            f"{float(pt.std_err)!r},{pt.trials}"
        )
    return "\n".join(lines) + "\n"
