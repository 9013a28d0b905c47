"""
Maps between hydrodynamic (eta, v) and classical psi variables
"""

import numpy as np
from scipy import fft

from ..errors import LiftingError
from ..grid.spectral_grid import cumulative_integral
from ..grid.states import ClassicalState, HydroState

MIN_MODULUS = 1e-8


def hydro_to_classical(state: HydroState) -> ClassicalState:
    """psi = sqrt(1 - eta) exp(-i int_0^x v), phase normalized at x = 0"""
    if state.max_eta >= 1.0:
        raise LiftingError("eta reaches 1; classical field undefined", max_eta=state.max_eta)
    phase, mean = cumulative_integral(state.v, state.grid)
    chi = np.sqrt(1.0 - state.eta) * np.exp(-1j * (phase - mean * state.grid.x))
    return ClassicalState(chi=chi, grid=state.grid, twist=mean, time=state.time,
                          metadata={"phase_jump": 2.0 * state.grid.L * mean})


def classical_to_hydro(state: ClassicalState) -> HydroState:
    """eta = 1 - |psi|^2, v = -Im(conj(psi) psi') / |psi|^2"""
    density = state.density
    if np.min(density) < MIN_MODULUS ** 2:
        raise LiftingError("psi vanishes; lifting undefined", min_modulus=float(np.sqrt(np.min(density))))
    grid = state.grid
    chi_x = fft.ifft(grid.multiplier(1, real=False) * fft.fft(state.chi))
    v = state.twist - np.imag(np.conj(state.chi) * chi_x) / density
    return HydroState(1.0 - density, v, grid, state.time)
