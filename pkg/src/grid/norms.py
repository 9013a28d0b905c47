"""
Weighted energy-space norms and the metric on classical fields
"""

from typing import Optional

import numpy as np

from ..errors import GridError
from .spectral_grid import Grid, derivatives, frame_coordinate
from .states import ClassicalState, HydroState

FIELD_FLOOR = 1e-12


def weight(grid: Grid, rho: float, center: float = 0.0, support: Optional[np.ndarray] = None) -> np.ndarray:
    """min(|x - center|, L - dx/2)^rho, zero outside `support`"""
    r = np.minimum(np.abs(frame_coordinate(grid, center)), grid.L - 0.5 * grid.dx)
    w = np.power(r, rho) if rho else np.ones(grid.n)
    if support is not None:
        w = np.where(support, w, 0.0)
    return w


def x_norm_squared(state: HydroState, rho: float = 0.0, l: int = 0, center: float = 0.0) -> float:
    """Squared X_rho^l norm

    sum_{m <= l+1} int (d^m eta)^2 |x|^rho + sum_{m <= l} int (d^m v)^2 |x|^rho.
    For l = -1 both components are taken in plain L^2.
    """
    if l < -1:
        raise GridError("norm order must be >= -1", l=l)
    grid = state.grid
    eta_orders = tuple(range(1, l + 2))
    v_orders = tuple(range(1, l + 1))
    eta_terms = [state.eta] + list(derivatives(state.eta, grid, eta_orders) if eta_orders else [])
    v_terms = [state.v] + list(derivatives(state.v, grid, v_orders) if v_orders else [])

    support = None
    if rho:
        support = np.zeros(grid.n, dtype=bool)
        for term in eta_terms + v_terms:
            support |= np.abs(term) > FIELD_FLOOR
    w = weight(grid, rho, center, support)

    total = sum(np.sum(t * t * w) for t in eta_terms) + sum(np.sum(t * t * w) for t in v_terms)
    return float(total * grid.dx)


def x_norm(state: HydroState, rho: float = 0.0, l: int = 0, center: float = 0.0) -> float:
    """X_rho^l norm; rho = 0, l = 0 is the energy-space norm"""
    return float(np.sqrt(x_norm_squared(state, rho, l, center)))


def metric_d(first: ClassicalState, second: ClassicalState) -> float:
    """sup_{|x|<=1} |psi1 - psi2| + ||eta1 - eta2||_2 + ||psi1' - psi2'||_2"""
    grid = first.grid
    near = np.abs(grid.x) <= 1.0
    local = float(np.max(np.abs(first.psi[near] - second.psi[near])))
    deta = second.density - first.density
    dpsi = first.derivative(1) - second.derivative(1)
    return (local
            + float(np.sqrt(np.sum(deta ** 2) * grid.dx))
            + float(np.sqrt(np.sum(np.abs(dpsi) ** 2) * grid.dx)))
