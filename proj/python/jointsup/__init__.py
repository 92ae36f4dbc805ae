"""Joint crossing probabilities of two drifted Brownian suprema."""

from ._core import (
    NumericalIntegrityError,
    ValidationError,
    bvn_cdf,
    bvn_sf,
    classify,
    high_threshold,
    log_bvn_sf,
    log_many_source,
    log_norm_sf,
    log_pi_joint,
    many_source_asym,
    norm_sf,
    pi1d,
    pi_infinite,
    pi_joint,
    run_cli,
    simulate_joint,
)

__all__ = [
    "NumericalIntegrityError",
    "ValidationError",
    "bvn_cdf",
    "bvn_sf",
    "classify",
    "high_threshold",
    "log_bvn_sf",
    "log_many_source",
    "log_norm_sf",
    "log_pi_joint",
    "many_source_asym",
    "norm_sf",
    "pi1d",
    "pi_infinite",
    "pi_joint",
    "run_cli",
    "simulate_joint",
]
