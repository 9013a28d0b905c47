"""Traveling-Wave Profiles"""

from .reduced import BranchForms, reduced_n, n_c, n_c_prime, n_c_second
from .traveling_wave import (
    TravelingWave,
    AmplitudeEstimate,
    AdmissibleWindow,
    xi_c,
    build_profile,
    assemble_wave,
    classical_wave,
    amplitude_Mc,
    momentum_of_speed,
    momentum_speed_derivative,
    admissible_window,
)
from .cache import ProfileCache
from .branch import ProfileBranch

__all__ = [
    "BranchForms",
    "reduced_n",
    "n_c",
    "n_c_prime",
    "n_c_second",
    "TravelingWave",
    "AmplitudeEstimate",
    "AdmissibleWindow",
    "xi_c",
    "build_profile",
    "assemble_wave",
    "classical_wave",
    "amplitude_Mc",
    "momentum_of_speed",
    "momentum_speed_derivative",
    "admissible_window",
    "ProfileCache",
    "ProfileBranch",
]
