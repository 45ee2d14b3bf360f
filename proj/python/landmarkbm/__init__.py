"""Brownian motion on kernel landmark spaces."""

from ._landmarkbm import (
    SHIPPED_SEED,
    AsymptoticData,
    DegenerateConfiguration,
    ExperimentIoError,
    RadialKernel,
    brownian_drift,
    classify,
    classify_kernel,
    classify_numerically,
    cometric_matrix,
    distance_drift,
    distance_sigma,
    em_step,
    min_pairwise_distance,
    preset_config,
    preset_names,
    run_experiment,
    simulate,
    simulate_distance,
    sqrt_psd,
)

__all__ = [
    "SHIPPED_SEED",
    "AsymptoticData",
    "DegenerateConfiguration",
    "ExperimentIoError",
    "RadialKernel",
    "brownian_drift",
    "classify",
    "classify_kernel",
    "classify_numerically",
    "cometric_matrix",
    "distance_drift",
    "distance_sigma",
    "em_step",
    "min_pairwise_distance",
    "preset_config",
    "preset_names",
    "run_experiment",
    "simulate",
    "simulate_distance",
    "sqrt_psd",
]
