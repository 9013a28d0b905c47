"""
Perturbation library: localized Gaussian bumps, counter-propagating radiation
packets and seeded random bump sums, scaled relative to ||Q_c||_X.
"""

import numpy as np

from ..errors import ConfigError
from ..grid.norms import x_norm
from ..grid.spectral_grid import Grid
from ..grid.states import HydroState
from ..models.nonlinearity import sound_speed
from ..profile.traveling_wave import TravelingWave
from .config_loader import PerturbationSection


def _targeted(grid: Grid, shape: np.ndarray, target: str) -> HydroState:
    eta = shape if target in ("eta", "both") else np.zeros(grid.n)
    v = shape if target in ("v", "both") else np.zeros(grid.n)
    return HydroState(eta, v, grid)


def gaussian_bump(grid: Grid, center: float, width: float, target: str = "both") -> HydroState:
    shape = np.exp(-0.5 * ((grid.x - center) / width) ** 2)
    return _targeted(grid, shape, target)


def radiation_packet(grid: Grid, center: float, width: float, wavenumber: float, speed: float) -> HydroState:
    """Carrier cos(k x) under a Gaussian envelope, with v paired to travel towards -x"""
    eta = np.cos(wavenumber * (grid.x - center)) * np.exp(-0.5 * ((grid.x - center) / width) ** 2)
    return HydroState(eta, -0.5 * speed * eta, grid)


def random_bumps(grid: Grid, seed: int, count: int, target: str = "both", spread: float = 10.0) -> HydroState:
    """Sum of `count` Gaussians with seeded centers, widths and signs"""
    rng = np.random.default_rng(seed)
    eta = np.zeros(grid.n)
    v = np.zeros(grid.n)
    for _ in range(count):
        center = rng.uniform(-spread, spread)
        width = rng.uniform(1.0, 3.0)
        profile = np.exp(-0.5 * ((grid.x - center) / width) ** 2)
        eta += rng.choice((-1.0, 1.0)) * rng.uniform(0.5, 1.0) * profile
        v += rng.choice((-1.0, 1.0)) * rng.uniform(0.5, 1.0) * profile
    if target == "eta":
        v[:] = 0.0
    elif target == "v":
        eta[:] = 0.0
    return HydroState(eta, v, grid)


def perturbation_shape(section: PerturbationSection, wave: TravelingWave) -> HydroState:
    """Unnormalized perturbation on the wave's grid"""
    grid = wave.grid
    if section.shape == "gaussian":
        return gaussian_bump(grid, section.center, section.width, section.target)
    if section.shape == "radiation":
        return radiation_packet(grid, section.center, section.width, section.wavenumber, sound_speed(wave.model))
    if section.shape == "random":
        return random_bumps(grid, section.seed, section.bumps, section.target)
    return HydroState.zeros(grid)


def perturbed_wave(wave: TravelingWave, section: PerturbationSection, amplitude: float = None) -> HydroState:
    """Q_c + delta with ||delta||_X = amplitude * ||Q_c||_X"""
    amplitude = section.amplitude if amplitude is None else amplitude
    if section.shape == "none" or amplitude == 0.0:
        return wave.state
    shape = perturbation_shape(section, wave)
    size = x_norm(shape)
    if size == 0.0:
        raise ConfigError("perturbation shape vanishes on the grid", shape=section.shape)
    delta = shape.scaled(amplitude * x_norm(wave.state) / size)
    return wave.state + delta
