"""
Phase parameter theta(t) of a classical trajectory, read through a smooth
compactly supported bump centered on the soliton.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.ndimage import gaussian_filter1d

from ..config import settings
from ..grid.spectral_grid import Grid
from ..grid.states import ClassicalState
from ..profile.traveling_wave import TravelingWave, classical_wave

MOLLIFIER_SAMPLES = 3.0


def bump(grid: Grid, width: float) -> np.ndarray:
    """exp(1 - 1/(1 - (x/w)^2)) on |x| < w, zero elsewhere; equals 1 at x = 0"""
    r = grid.x / width
    out = np.zeros(grid.n)
    inside = np.abs(r) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
    return out


def reference_pairing(wave: TravelingWave, width: Optional[float] = None) -> tuple:
    """(width, d) with d = int bump * u_c, shrinking the support until |d| is
    at least half of |u_c(0)| int bump"""
    width = settings.bump_width if width is None else width
    grid = wave.grid
    profile = classical_wave(wave).psi
    centre = abs(profile[grid.origin])
    while True:
        chi = bump(grid, width)
        pairing = np.sum(chi * profile) * grid.dx
        if abs(pairing) >= 0.5 * centre * np.sum(chi) * grid.dx or width <= 4.0 * grid.dx:
            return width, complex(pairing)
        width *= 0.5


@dataclass(frozen=True)
class PhaseSeries:
    times: np.ndarray
    theta: np.ndarray
    flags: np.ndarray
    width: float
    reference: complex

    @property
    def theta_dot(self) -> np.ndarray:
        if self.times.size < 3:
            return np.full(self.times.size, np.nan)
        return np.gradient(self.theta, self.times, edge_order=2)


def phase_theta(snapshots: List[ClassicalState], positions: Sequence[float], wave: TravelingWave,
                width: Optional[float] = None, mollify: bool = False) -> PhaseSeries:
    """theta(t) = arg(int bump psi_t(. + a(t))) - arg(d), unwrapped in t

    Samples whose pairing falls below |d|/2 are flagged. With `mollify`, the
    unwrapped series is smoothed by a Gaussian of three snapshot spacings.
    """
    width, reference = reference_pairing(wave, width)
    chi = bump(wave.grid, width)
    angles = np.empty(len(snapshots))
    flags = np.zeros(len(snapshots), dtype=bool)
    for j, (snapshot, a) in enumerate(zip(snapshots, positions)):
        pairing = np.sum(chi * snapshot.shifted(a).psi) * snapshot.grid.dx
        angles[j] = np.angle(pairing)
        flags[j] = abs(pairing) < 0.5 * abs(reference)
    theta = np.unwrap(angles) - np.angle(reference)
    if mollify and theta.size > 1:
        theta = gaussian_filter1d(theta, MOLLIFIER_SAMPLES, mode="nearest")
    times = np.array([s.time for s in snapshots])
    return PhaseSeries(times=times, theta=theta, flags=flags, width=width, reference=reference)
