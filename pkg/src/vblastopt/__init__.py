"""Power and rate allocation toolkit for layered MIMO links.

Library layout: `channel` draws fading matrices and computes detection
gains, `waterfill` holds the per-channel allocators, `strategies` the
fixed and averaged splits, `outage` the closed-form outage expressions,
`engine` the deterministic Monte Carlo sweeps, `analysis` the slope and
gain estimators, `verify` the self-check suites, and `cli` the command
line front end.
"""

__version__ = "0.1.0"

from .analysis import (
    DiversityEstimate,
    SnrGainEstimate,
    closedform_curve,
    diversity_slope,
    isotonic_cleanup,
    snr_gain,
    theorem1_report,
)
from .channel import (
    per_stream_capacity,
    sample_channel,
    sample_channels,
    sic_gains,
    sic_gains_batch,
)
from .engine import (
    CurvePoint,
    ErgodicPoint,
    OutageCurve,
    SimConfig,
    curve_csv,
    ergodic_csv,
    run_ergodic_sweep,
    run_outage_sweep,
    wilson_interval,
)
from .outage import (
    OutageParams,
    exact_outage,
    high_snr_outage,
    mrc_outage_cdf,
    stream_orders,
)
from .strategies import (
    STRATEGY_TAGS,
    Theorem3Fit,
    average_opa,
    avg_ergodic_allocation,
    corollary2_allocate,
    ergodic_coefficients,
    fit_theorem3,
    ora_rates,
    uniform_allocation,
)
from .waterfill import (
    AllocationResult,
    clip_allocation,
    conventional_wf,
    enumerate_subsets,
    fwf,
    water_level,
)

__all__ = [
    "__version__",
    "AllocationResult",
    "CurvePoint",
    "DiversityEstimate",
    "ErgodicPoint",
    "OutageCurve",
    "OutageParams",
    "SimConfig",
    "SnrGainEstimate",
    "STRATEGY_TAGS",
    "Theorem3Fit",
    "average_opa",
    "avg_ergodic_allocation",
    "closedform_curve",
    "clip_allocation",
    "conventional_wf",
    "corollary2_allocate",
    "curve_csv",
    "diversity_slope",
    "enumerate_subsets",
    "ergodic_coefficients",
    "ergodic_csv",
    "exact_outage",
    "fit_theorem3",
    "fwf",
    "high_snr_outage",
    "isotonic_cleanup",
    "mrc_outage_cdf",
    "ora_rates",
    "per_stream_capacity",
    "run_ergodic_sweep",
    "run_outage_sweep",
    "sample_channel",
    "sample_channels",
    "sic_gains",
    "sic_gains_batch",
    "snr_gain",
    "stream_orders",
    "theorem1_report",
    "uniform_allocation",
    "water_level",
    "wilson_interval",
]
