"""Post-processing of outage curves: diversity order, SNR gain, orderings.

Works on `OutageCurve` objects whether they came from Monte Carlo or
from the closed-form evaluator (see `closedform_curve`), since both are
just points with confidence bands.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .engine import CurvePoint, OutageCurve
from .outage import OutageParams, exact_outage, mrc_outage_cdf, stream_orders

LN10 = np.log(10.0)


def closedform_curve(
    label: str,
    n: int,
    m: int,
    rate_nats: float,
    gamma0_db_grid,
    allocation: np.ndarray | Callable[[float], np.ndarray],
) -> OutageCurve:
    """Exact outage curve of a fixed-power strategy, as an OutageCurve.

    `allocation` is one power vector or a callable on linear SNR. Points
    carry zero-width confidence bands and are always reliable.
    """
    points = []
    for gdb in np.asarray(gamma0_db_grid, dtype=float):
        gamma0 = 10.0 ** (gdb / 10.0)
        alphas = allocation(gamma0) if callable(allocation) else np.asarray(allocation)
        p = exact_outage(OutageParams(n, m, rate_nats, gamma0, tuple(alphas)))
        points.append(CurvePoint(float(gdb), p, p, p, 0, 0, True))
    return OutageCurve(label, tuple(points))


@dataclass(frozen=True)
class DiversityEstimate:
    """Log-log slope of an outage curve: p ~ gamma0^(-d) at high SNR."""

    d_hat: float
    window_db: tuple[float, float]
    r_squared: float
    n_points: int


def diversity_slope(
    curve: OutageCurve, window_db: tuple[float, float] | None = None
) -> DiversityEstimate:
    """Least-squares slope of -ln(p) against ln(gamma0) over a window.

    Only reliable points with p > 0 enter the fit. The default window is
    the top 15 dB of usable points; at least 3 points are required.
    """
    pts = [p for p in curve.points if p.reliable and p.p_hat > 0.0]
    if not pts:
        raise ValueError("no reliable nonzero points to fit")
    top = max(p.gamma0_db for p in pts)
    lo, hi = window_db if window_db is not None else (top - 15.0, top)
    pts = [p for p in pts if lo <= p.gamma0_db <= hi]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 reliable points in [{lo}, {hi}] dB")

    x = np.array([p.gamma0_db for p in pts]) * LN10 / 10.0  # ln(gamma0)
    y = np.log([p.p_hat for p in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return DiversityEstimate(-float(slope), (lo, hi), float(r2), len(pts))


def _pav_nonincreasing(y: np.ndarray) -> np.ndarray:
    """Pool-adjacent-violators fit of a nonincreasing sequence."""
    vals: list[float] = []
    counts: list[int] = []
    for v in y:
        vals.append(float(v))
        counts.append(1)
        while len(vals) > 1 and vals[-2] < vals[-1]:
            w = counts[-1] + counts[-2]
            merged = (vals[-1] * counts[-1] + vals[-2] * counts[-2]) / w
            vals.pop()
            counts.pop()
            vals[-1] = merged
            counts[-1] = w
    return np.repeat(vals, counts)


def isotonic_cleanup(curve: OutageCurve) -> np.ndarray:
    """Monotone-nonincreasing version of p_hat, kept inside each point's CI.

    The raw fit is pooled-adjacent-violators; it is then clamped between
    the running envelopes of the confidence bounds, which preserves
    monotonicity while guaranteeing no point leaves its own interval.
    """
    p = curve.p_hat
    lo = np.array([pt.ci_low for pt in curve.points])
    hi = np.array([pt.ci_high for pt in curve.points])
    fit = _pav_nonincreasing(p)
    upper = np.minimum.accumulate(hi)
    lower = np.maximum.accumulate(lo[::-1])[::-1]
    if np.all(lower <= upper):
        return np.clip(fit, lower, upper)
    # Bands too tight to admit any monotone path: fall back to the plain
    # per-point clamp and accept residual wiggle.
    return np.clip(fit, lo, hi)


def _crossing_db(snr_db: np.ndarray, p: np.ndarray, level: float) -> float:
    """SNR (dB) where a nonincreasing curve crosses `level`, log-interpolated."""
    above = p >= level
    if not above.any() or above.all():
        raise ValueError(
            f"outage level {level:g} not bracketed by curve (range "
            f"{p.min():.3g}..{p.max():.3g})"
        )
    i = int(np.nonzero(above)[0][-1])
    lp = np.log(np.maximum(p, 1e-300))
    t = (np.log(level) - lp[i]) / (lp[i + 1] - lp[i])
    return float(snr_db[i] + t * (snr_db[i + 1] - snr_db[i]))


@dataclass(frozen=True)
class SnrGainEstimate:
    """Horizontal dB gain of one strategy over a reference, per outage level."""

    reference: str
    optimized: str
    levels: tuple[float, ...]
    gains_db: tuple[float, ...]


def snr_gain(
    optimized: OutageCurve, reference: OutageCurve, levels
) -> SnrGainEstimate:
    """SNR gain: how many dB less the optimized strategy needs per level.

    Both curves are monotone-cleaned first; each level must be bracketed
    by both. Positive gain means the optimized curve reaches the level
    at lower SNR. Swapping the arguments flips the sign exactly.
    """
    levels = tuple(float(v) for v in levels)
    if not levels or any(not 0.0 < v < 1.0 for v in levels):
        raise ValueError("levels must be probabilities strictly inside (0, 1)")
    p_ref = isotonic_cleanup(reference)
    p_opt = isotonic_cleanup(optimized)
    gains = tuple(
        _crossing_db(reference.gamma0_db, p_ref, lv)
        - _crossing_db(optimized.gamma0_db, p_opt, lv)
        for lv in levels
    )
    return SnrGainEstimate(reference.strategy, optimized.strategy, levels, gains)


@dataclass(frozen=True)
class OrderingRow:
    gamma0_db: float
    label: str
    lhs: float
    rhs: float
    slack: float  # tolerance actually granted (3 half-widths)
    passed: bool


@dataclass(frozen=True)
class OrderingReport:
    rows: tuple[OrderingRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


# The outage-probability ordering of the strategy ladder, best-informed
# last: average capacity-optimal powers can only do worse than average
# outage-optimal powers, which can only do worse than per-draw optimal
# power and rate adaptation.
_CHAIN = ("ergodic", "avg-opa", "opra")


def theorem1_report(
    curves: dict[str, OutageCurve],
    n: int | None = None,
    m: int | None = None,
    rate_nats: float | None = None,
) -> OrderingReport:
    """Check the outage orderings between strategies, point by point.

    For each SNR point: every adjacent pair present from the ladder
    (ergodic >= avg-opa >= opra) must satisfy p(worse) >= p(better) up
    to 3 Wilson half-widths, and every conditional-activation variant
    must match the full optimizer to the same tolerance. When the system
    size (n, m, rate_nats) is supplied and a rate-adaptive uniform-power
    curve is present, its estimate must additionally sit inside the
    closed-form product bounds implied by the per-stream gain laws.
    """
    rows: list[OrderingRow] = []
    chain = [t for t in _CHAIN if t in curves]
    some = next(iter(curves.values()))
    npts = len(some.points)

    def half_width(pt: CurvePoint) -> float:
        return max(pt.p_hat - pt.ci_low, pt.ci_high - pt.p_hat)

    for i in range(npts):
        for a, b in zip(chain, chain[1:]):
            pa, pb = curves[a].points[i], curves[b].points[i]
            slack = 3.0 * max(half_width(pa), half_width(pb))
            rows.append(
                OrderingRow(
                    pa.gamma0_db,
                    f"{a} >= {b}",
                    pa.p_hat,
                    pb.p_hat,
                    slack,
                    pa.p_hat >= pb.p_hat - slack,
                )
            )
        if "opra" in curves:
            for tag in curves:
                if not tag.startswith("cor2-"):
                    continue
                pa, pb = curves["opra"].points[i], curves[tag].points[i]
                slack = 3.0 * max(half_width(pa), half_width(pb))
                rows.append(
                    OrderingRow(
                        pa.gamma0_db,
                        f"opra == {tag}",
                        pa.p_hat,
                        pb.p_hat,
                        slack,
                        abs(pa.p_hat - pb.p_hat) <= slack,
                    )
                )
    if "ora" in curves and None not in (n, m, rate_nats):
        rows.extend(_ora_product_bounds(curves["ora"], n, m, rate_nats))
    return OrderingReport(tuple(rows))


def _ora_product_bounds(
    curve: OutageCurve, n: int, m: int, rate_nats: float
) -> list[OrderingRow]:
    """Bound the rate-adaptive uniform-power outage by closed-form products.

    With independent unit-power stream gains, every stream falling below
    the per-stream rate forces the sum below the total target, and the
    sum falling below the total forces every stream below the total, so
    prod_i P{C_i < R} <= P{sum C < mR} <= prod_i P{C_i < mR}. The
    estimate must sit inside these bounds up to 3 half-widths.
    """
    rows: list[OrderingRow] = []
    orders = stream_orders(n, m)
    for pt in curve.points:
        gamma0 = 10.0 ** (pt.gamma0_db / 10.0)
        z_lo = np.expm1(rate_nats) / gamma0
        z_hi = np.expm1(m * rate_nats) / gamma0
        lower = float(np.prod([mrc_outage_cdf(int(k), z_lo) for k in orders]))
        upper = float(np.prod([mrc_outage_cdf(int(k), z_hi) for k in orders]))
        slack = 3.0 * max(pt.p_hat - pt.ci_low, pt.ci_high - pt.p_hat)
        rows.append(
            OrderingRow(
                pt.gamma0_db,
                "ora in product bounds",
                lower,
                upper,
                slack,
                lower - slack <= pt.p_hat <= upper + slack,
            )
        )
    return rows
