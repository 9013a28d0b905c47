"""
Small-amplitude dispersion check around the constant background

A mode eta = delta cos(k x), v = 0 oscillates at omega^2 = c_s^2 k^2 + k^4
to leading order in delta.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..grid.spectral_grid import Grid
from ..grid.states import HydroState
from ..models.nonlinearity import NonlinearityModel, sound_speed
from .runner import IntegrationSettings, run


def dispersion_relation(k, c_s: float):
    """omega(k) = sqrt(k^4 + c_s^2 k^2)"""
    k = np.asarray(k, dtype=float)
    return np.sqrt(k ** 4 + c_s * c_s * k * k)


@dataclass(frozen=True)
class DispersionMeasurement:
    k: float
    omega_measured: float
    omega_theory: float
    amplitude: float

    @property
    def relative_error(self) -> float:
        return abs(self.omega_measured - self.omega_theory) / self.omega_theory


def _cosine(t, amplitude, omega, phase):
    return amplitude * np.cos(omega * t + phase)


def measure_dispersion(model: NonlinearityModel, grid: Grid, mode: int = 4, delta: float = 1e-6,
                       periods: float = 8.0, samples_per_period: int = 40) -> DispersionMeasurement:
    """Evolve a single Fourier mode with the hydro integrator and fit its frequency"""
    c_s = sound_speed(model)
    k = np.pi * mode / grid.L
    omega = float(dispersion_relation(k, c_s))
    period = 2.0 * np.pi / omega
    initial = HydroState(delta * np.cos(k * grid.x), np.zeros(grid.n), grid)
    config = IntegrationSettings(T=periods * period, t_snap=period / samples_per_period)
    trajectory = run(initial, periods * period, model, config)

    basis = np.cos(k * grid.x)
    norm = float(np.sum(basis * basis))
    amplitudes = np.array([np.sum(s.eta * basis) / norm for s in trajectory.snapshots])
    params, _ = optimize.curve_fit(_cosine, trajectory.times, amplitudes, p0=(delta, omega, 0.0))
    return DispersionMeasurement(k=float(k), omega_measured=abs(float(params[1])), omega_theory=omega,
                                 amplitude=abs(float(params[0])))
