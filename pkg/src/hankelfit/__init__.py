"""Rank-1 Hankel and Toeplitz approximation of complex matrices under L2
and L1 element-wise error, with a few-shot direction-of-arrival
application and a reproducible Monte Carlo benchmark."""

from .exceptions import DegenerateInputError, ReciprocalOfZeroError
from .grids import GridSpec
from .hankel import (
    flip,
    geometric_norm,
    hankel_from_vector,
    is_hankel,
    structure_vector,
)
from .l1 import (
    L1InnerSolution,
    WeiszfeldConfig,
    alpha,
    approx_l1,
    approx_l1_real,
    objective_l1,
    real_weighted_median,
    weighted_median_coeff,
)
from .l2 import approx_l2, approx_l2_real, coefficient_l2, objective_l2
from .results import Rank1Fit
from .toeplitz import toeplitz_approx
from .doa import (
    ArrayConfig,
    DoaScene,
    ThetaGrid,
    acquire,
    average_per_sensor,
    estimate_doa_l1,
    estimate_doa_l2,
    matched_filter_ml,
    steering_vector,
    z_of_theta,
)
from .noise import (
    FaultSpec,
    NoiseModel,
    calibrate_amplitude,
    draw_noise,
    inject_faults,
    rng_from_seed,
    seed_sequence,
    ula_sensor_map,
)
from .baselines import fbss_music, hankel_music, matrix_pencil, max_energy, toeplitz_music
from .bench import (
    ExperimentConfig,
    TrialRecord,
    emit_csv,
    emit_plot,
    parse_csv,
    run_experiment,
    summarize,
)
from .estimators import Rank1Hankel, Rank1Toeplitz, SlidingWindowDoA

__version__ = "0.1.0"

__all__ = [
    "DegenerateInputError",
    "ReciprocalOfZeroError",
    "GridSpec",
    "flip",
    "geometric_norm",
    "hankel_from_vector",
    "is_hankel",
    "structure_vector",
    "L1InnerSolution",
    "WeiszfeldConfig",
    "alpha",
    "approx_l1",
    "approx_l1_real",
    "objective_l1",
    "real_weighted_median",
    "weighted_median_coeff",
    "approx_l2",
    "approx_l2_real",
    "coefficient_l2",
    "objective_l2",
    "Rank1Fit",
    "toeplitz_approx",
    "ArrayConfig",
    "DoaScene",
    "ThetaGrid",
    "acquire",
    "average_per_sensor",
    "estimate_doa_l1",
    "estimate_doa_l2",
    "matched_filter_ml",
    "steering_vector",
    "z_of_theta",
    "FaultSpec",
    "NoiseModel",
    "calibrate_amplitude",
    "draw_noise",
    "inject_faults",
    "rng_from_seed",
    "seed_sequence",
    "ula_sensor_map",
    "fbss_music",
    "hankel_music",
    "matrix_pencil",
    "max_energy",
    "toeplitz_music",
    "ExperimentConfig",
    "TrialRecord",
    "emit_csv",
    "emit_plot",
    "parse_csv",
    "run_experiment",
    "summarize",
    "Rank1Hankel",
    "Rank1Toeplitz",
    "SlidingWindowDoA",
]
