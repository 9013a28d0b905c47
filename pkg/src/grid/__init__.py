"""Spectral Grid, States and Norms"""

from .spectral_grid import (
    Grid,
    spectral_derivative,
    derivatives,
    windowed_derivative,
    shift,
    resample,
    integrate,
    cumulative_integral,
    frame_coordinate,
    mirror,
)
from .states import HydroState, ClassicalState
from .norms import weight, x_norm, x_norm_squared, metric_d

__all__ = [
    "Grid",
    "spectral_derivative",
    "derivatives",
    "windowed_derivative",
    "shift",
    "resample",
    "integrate",
    "cumulative_integral",
    "frame_coordinate",
    "mirror",
    "HydroState",
    "ClassicalState",
    "weight",
    "x_norm",
    "x_norm_squared",
    "metric_d",
]
