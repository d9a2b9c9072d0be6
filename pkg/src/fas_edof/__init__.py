"""Fluid antenna system outage/capacity analysis via equivalent degrees of freedom.

The library models a fluid antenna selecting the best of N correlated ports
inside an aperture of W wavelengths.  The closed forms treat it as selection
combining over K* = 2*ceil(W)+1 effective branches; the Monte Carlo harness
generates the exact correlated channel to check every claim.
"""

from .closedform import (
    BcmParams,
    SnrPoint,
    asymptotic_outage,
    capacity_high_snr_asymptote,
    capacity_quadrature,
    db_to_linear,
    default_blocks,
    ergodic_capacity_series,
    linear_to_db,
    outage_bcm,
    outage_edof,
    outage_iid,
    outage_single,
    outage_wim,
    required_snr,
)
from .correlation import (
    BranchWeights,
    CorrelationMatrix,
    Spectrum,
    build_jakes,
    eigendecompose,
    geometry_spectrum,
    kron_spectrum,
    normalized_weights,
    truncation_mse,
)
from .errors import InsufficientEventsError, NumericError, PrecisionLossWarning
from .experiments import ExperimentTable, emit, experiment_names, run_experiment
from .fama import FamaConfig, fama_floor, fama_outage
from .geometry import FasGeometry, PlanarGeometry, edof_1d, edof_2d, min_aperture
from .montecarlo import (
    McConfig,
    McEstimate,
    estimate_accuracy_ratio,
    estimate_capacity,
    estimate_diversity_slope,
    estimate_fama_outage,
    estimate_outage_exact,
    estimate_port_means,
    estimate_truncation_mse,
    sample_channel_gains,
)
from .specfun import (
    GAMMA_EM,
    StableSum,
    bessel_j0,
    exp_integral_e1,
    harmonic,
    scaled_exp_integral_e1,
    stable_alternating_binomial_sum,
)

__version__ = "0.1.0"

__all__ = [
    "BcmParams",
    "BranchWeights",
    "CorrelationMatrix",
    "ExperimentTable",
    "FamaConfig",
    "FasGeometry",
    "GAMMA_EM",
    "InsufficientEventsError",
    "McConfig",
    "McEstimate",
    "NumericError",
    "PlanarGeometry",
    "PrecisionLossWarning",
    "SnrPoint",
    "Spectrum",
    "StableSum",
    "asymptotic_outage",
    "bessel_j0",
    "build_jakes",
    "capacity_high_snr_asymptote",
    "capacity_quadrature",
    "db_to_linear",
    "default_blocks",
    "edof_1d",
    "edof_2d",
    "eigendecompose",
    "emit",
    "ergodic_capacity_series",
    "estimate_accuracy_ratio",
    "estimate_capacity",
    "estimate_diversity_slope",
    "estimate_fama_outage",
    "estimate_outage_exact",
    "estimate_port_means",
    "estimate_truncation_mse",
    "exp_integral_e1",
    "experiment_names",
    "fama_floor",
    "fama_outage",
    "geometry_spectrum",
    "harmonic",
    "kron_spectrum",
    "linear_to_db",
    "min_aperture",
    "normalized_weights",
    "outage_bcm",
    "outage_edof",
    "outage_iid",
    "outage_single",
    "outage_wim",
    "required_snr",
    "run_experiment",
    "sample_channel_gains",
    "scaled_exp_integral_e1",
    "stable_alternating_binomial_sum",
    "truncation_mse",
]
