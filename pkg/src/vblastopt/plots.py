"""Figure rendering for sweep and fit outputs.

Every function writes a PNG to the given path and returns the path. The
Agg backend is forced so rendering works headless; nothing here opens a
window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

MARKERS = ("o", "s", "^", "v", "D", "x", "+", "*", "p")


def plot_outage_curves(curves, path, rate_nats=None):
    """Render outage probability vs SNR on a log axis, one line per strategy.

    Reliable points get filled markers with confidence whiskers, starving
    points hollow markers. Curves with no positive estimate are skipped.

    Parameters
    ----------
    curves : sequence of OutageCurve
    path : str or Path
        Output PNG location.
    rate_nats : float, optional
        Target rate, shown in the title when given.
    """
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    drawn = 0
    for k, curve in enumerate(curves):
        db = np.asarray(curve.gamma0_db)
        p = np.asarray(curve.p_hat)
        keep = p > 0
        if not keep.any():
            continue
        marker = MARKERS[k % len(MARKERS)]
        lo = np.array([pt.ci_low for pt in curve.points])
        hi = np.array([pt.ci_high for pt in curve.points])
        rel = np.array([pt.reliable for pt in curve.points])
        good = keep & rel
        line = None
        if good.any():
            yerr = np.vstack([p[good] - lo[good], hi[good] - p[good]])
            line = ax.errorbar(
                db[good], p[good], yerr=np.clip(yerr, 0, None),
                marker=marker, ms=5, lw=1.5, capsize=2, label=curve.strategy,
            )
        weak = keep & ~rel
        if weak.any():
            color = line.lines[0].get_color() if line is not None else None
            ax.semilogy(
                db[weak], p[weak], marker=marker, ms=5, lw=0,
                mfc="none", color=color,
                label=None if line is not None else curve.strategy,
            )
        drawn += 1
    ax.set_yscale("log")
    ax.set_xlabel(r"$\gamma_0$ (dB)")
    ax.set_ylabel("outage probability")
    title = "Outage vs SNR"
    if rate_nats is not None:
        title += f" (R = {rate_nats:g} nats/stream)"
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if drawn:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_scaling_fit(fit, path):
    """Render the mean-power power-law fit on log-log axes.

    One scatter series per fitted stream (the measured average optimum
    powers) with the fitted power law overlaid as a line.

    Parameters
    ----------
    fit : Theorem3Fit
    path : str or Path
    """
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    db = 10.0 * np.log10(fit.gamma0_grid)
    dense = np.logspace(
        np.log10(fit.gamma0_grid[0]), np.log10(fit.gamma0_grid[-1]), 200
    )
    pred = fit.predict(dense)
    for j in range(fit.mean_alphas.shape[1] - 1):
        i = j + 2
        pts = ax.semilogy(
            db, fit.mean_alphas[:, j + 1], MARKERS[j % len(MARKERS)],
            ms=6, lw=0, label=rf"stream {i} measured",
        )
        ax.semilogy(
            10.0 * np.log10(dense), pred[:, j + 1], "-", lw=1.5,
            color=pts[0].get_color(),
            label=rf"stream {i} fit, slope $-{{{fit.exponents[j]:.3g}}}$",
        )
    ax.set_xlabel(r"$\gamma_0$ (dB)")
    ax.set_ylabel("mean optimum power fraction")
    ax.set_title("Average-power scaling fit")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_allocation_vs_snr(gamma0_db, alphas, path):
    """Render per-stream power fractions against the SNR grid.

    Parameters
    ----------
    gamma0_db : array_like, shape (p,)
    alphas : array_like, shape (p, m)
        One allocation row per grid point.
    path : str or Path
    """
    gamma0_db = np.asarray(gamma0_db, dtype=float)
    alphas = np.atleast_2d(np.asarray(alphas, dtype=float))
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for i in range(alphas.shape[1]):
        ax.plot(
            gamma0_db, alphas[:, i], marker=MARKERS[i % len(MARKERS)],
            ms=5, lw=1.5, label=f"stream {i + 1}",
        )
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel(r"$\gamma_0$ (dB)")
    ax.set_ylabel("power fraction")
    ax.set_title("SNR-matched power split")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
