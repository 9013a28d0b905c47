"""Modulation Parameters (a, c, theta) and Residual"""

from .decomposition import Decomposition, ModulationTrack, decompose, track
from .phase import PhaseSeries, bump, reference_pairing, phase_theta

__all__ = [
    "Decomposition",
    "ModulationTrack",
    "decompose",
    "track",
    "PhaseSeries",
    "bump",
    "reference_pairing",
    "phase_theta",
]
