"""
Conserved quantities: Ginzburg-Landau energy and momentum
"""

import numpy as np

from ..grid.spectral_grid import spectral_derivative
from ..grid.states import ClassicalState, HydroState
from ..models.nonlinearity import NonlinearityModel, potential_F


def hydro_energy(state: HydroState, model: NonlinearityModel) -> float:
    """E = 1/8 int eta'^2/(1-eta) + 1/2 int (1-eta) v^2 + 1/2 int F(1-eta)"""
    b = 1.0 - state.eta
    eta_x = spectral_derivative(state.eta, state.grid, 1)
    density = 0.125 * eta_x ** 2 / b + 0.5 * b * state.v ** 2 + 0.5 * potential_F(model, b)
    return float(np.sum(density) * state.grid.dx)


def hydro_momentum(state: HydroState) -> float:
    """p = 1/2 int eta v"""
    return float(0.5 * np.sum(state.eta * state.v) * state.grid.dx)


def classical_energy(state: ClassicalState, model: NonlinearityModel) -> float:
    """E = 1/2 int |psi'|^2 + 1/2 int F(|psi|^2)"""
    dpsi = state.derivative(1)
    density = 0.5 * np.abs(dpsi) ** 2 + 0.5 * potential_F(model, state.density)
    return float(np.sum(density) * state.grid.dx)
