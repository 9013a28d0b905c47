"""
Pseudo-spectral RK4 integrator for the hydrodynamic system

    d_t eta = -2 d_x (v (1 - eta))
    d_t v   = -d_x (f(1 - eta) - v^2 - eta''/(2(1 - eta)) - eta'^2/(4(1 - eta)^2))

written in a frame moving at constant speed (frame_speed = 0 is the lab).
"""

from typing import Tuple

import numpy as np
from scipy import fft

from ..config import RunStatus, settings
from ..errors import DynamicsAbort
from ..grid.spectral_grid import Grid
from ..grid.states import HydroState
from ..models.nonlinearity import NonlinearityModel


def stable_dt(grid: Grid, stability_constant: float = None) -> float:
    """Largest step allowed by dt <= C / k_max^2 (quartic dispersion)"""
    constant = settings.stability_constant if stability_constant is None else stability_constant
    return constant / grid.k_max ** 2


def hydro_rhs(eta: np.ndarray, v: np.ndarray, grid: Grid, model: NonlinearityModel,
              frame_speed: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """Time derivative of (eta, v); nonlinear terms are 2/3-dealiased"""
    d1 = grid.multiplier(1)
    d2 = grid.multiplier(2)
    eta_hat = fft.rfft(eta)
    eta_x = fft.irfft(d1 * eta_hat, n=grid.n)
    eta_xx = fft.irfft(d2 * eta_hat, n=grid.n)
    b = 1.0 - eta

    flux_hat = fft.rfft(v * b) * grid.dealias
    pressure = model.f(b) - v * v - eta_xx / (2.0 * b) - eta_x * eta_x / (4.0 * b * b)
    pressure_hat = fft.rfft(pressure) * grid.dealias

    d_eta = fft.irfft(-2.0 * d1 * flux_hat, n=grid.n)
    d_v = fft.irfft(-d1 * pressure_hat, n=grid.n)
    if frame_speed:
        d_eta += frame_speed * eta_x
        d_v += frame_speed * fft.irfft(d1 * fft.rfft(v), n=grid.n)
    return d_eta, d_v


def step_hydro(state: HydroState, dt: float, model: NonlinearityModel, frame_speed: float = 0.0,
               eta_max_threshold: float = None) -> HydroState:
    """One classical RK4 step"""
    threshold = settings.eta_max_threshold if eta_max_threshold is None else eta_max_threshold
    if state.max_eta > threshold:
        raise DynamicsAbort("max eta above guard threshold", status=RunStatus.NEAR_VACUUM_ABORT,
                            last_good=state, max_eta=state.max_eta, threshold=threshold, time=state.time)
    grid = state.grid
    eta, v = state.eta, state.v

    k1e, k1v = hydro_rhs(eta, v, grid, model, frame_speed)
    k2e, k2v = hydro_rhs(eta + 0.5 * dt * k1e, v + 0.5 * dt * k1v, grid, model, frame_speed)
    k3e, k3v = hydro_rhs(eta + 0.5 * dt * k2e, v + 0.5 * dt * k2v, grid, model, frame_speed)
    k4e, k4v = hydro_rhs(eta + dt * k3e, v + dt * k3v, grid, model, frame_speed)

    new_eta = eta + (dt / 6.0) * (k1e + 2.0 * k2e + 2.0 * k3e + k4e)
    new_v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return HydroState(new_eta, new_v, grid, state.time + dt)
