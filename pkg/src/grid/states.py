"""
Field states on a Grid: hydrodynamic pair (eta, v) and twisted classical field
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import fft

from ..errors import GridError
from .spectral_grid import Grid, mirror, shift


def _frozen(values: np.ndarray, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HydroState:
    """Q = (eta, v) = (1 - |psi|^2, -d_x phase) at a fixed time"""

    eta: np.ndarray
    v: np.ndarray
    grid: Grid
    time: float = 0.0

    def __post_init__(self):
        if np.shape(self.eta) != (self.grid.n,) or np.shape(self.v) != (self.grid.n,):
            raise GridError("state fields do not match the grid", n=self.grid.n,
                            eta_shape=np.shape(self.eta), v_shape=np.shape(self.v))
        object.__setattr__(self, "eta", _frozen(self.eta, float))
        object.__setattr__(self, "v", _frozen(self.v, float))

    @classmethod
    def zeros(cls, grid: Grid, time: float = 0.0) -> "HydroState":
        return cls(np.zeros(grid.n), np.zeros(grid.n), grid, time)

    @classmethod
    def from_stacked(cls, vector: np.ndarray, grid: Grid, time: float = 0.0) -> "HydroState":
        return cls(vector[:grid.n], vector[grid.n:], grid, time)

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.eta, self.v])

    @property
    def max_eta(self) -> float:
        return float(np.max(self.eta))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.eta)) and np.all(np.isfinite(self.v)))

    def shifted(self, a: float) -> "HydroState":
        """State evaluated at x + a"""
        return replace(self, eta=shift(self.eta, self.grid, a), v=shift(self.v, self.grid, a))

    def mirrored(self) -> "HydroState":
        """(eta(-x), -v(-x)), the parity image"""
        return replace(self, eta=mirror(self.eta), v=-mirror(self.v))

    def swapped(self) -> "HydroState":
        """S(eta, v) = (v, eta)"""
        return replace(self, eta=self.v, v=self.eta)

    def with_time(self, time: float) -> "HydroState":
        return replace(self, time=time)

    def __add__(self, other: "HydroState") -> "HydroState":
        return replace(self, eta=self.eta + other.eta, v=self.v + other.v)

    def __sub__(self, other: "HydroState") -> "HydroState":
        return replace(self, eta=self.eta - other.eta, v=self.v - other.v)

    def scaled(self, factor: float) -> "HydroState":
        return replace(self, eta=factor * self.eta, v=factor * self.v)

    def inner(self, other: "HydroState") -> float:
        """L^2 x L^2 inner product"""
        return float(np.sum(self.eta * other.eta + self.v * other.v) * self.grid.dx)


@dataclass(frozen=True, eq=False)
class ClassicalState:
    """psi = chi * exp(-i q x) with chi periodic on the box

    The twist q = Theta / (2L) absorbs the total phase jump Theta of a dark
    soliton so that chi can be handled by FFTs.
    """

    chi: np.ndarray
    grid: Grid
    twist: float = 0.0
    time: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.shape(self.chi) != (self.grid.n,):
            raise GridError("classical field does not match the grid", n=self.grid.n)
        object.__setattr__(self, "chi", _frozen(self.chi, complex))

    @property
    def psi(self) -> np.ndarray:
        return self.chi * np.exp(-1j * self.twist * self.grid.x)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.chi) ** 2

    def derivative(self, order: int = 1) -> np.ndarray:
        """d_x^order psi, evaluated through the periodic chi"""
        m = self.grid.multiplier(order, real=False, offset=self.twist)
        return fft.ifft(m * fft.fft(self.chi)) * np.exp(-1j * self.twist * self.grid.x)

    def with_phase(self, theta: float) -> "ClassicalState":
        """Multiply psi by exp(i theta)"""
        return replace(self, chi=self.chi * np.exp(1j * theta))

    def with_time(self, time: float) -> "ClassicalState":
        return replace(self, time=time)

    def shifted(self, a: float) -> "ClassicalState":
        """psi(x + a), which keeps the same twist"""
        moved = shift(self.chi, self.grid, a) * np.exp(-1j * self.twist * a)
        return replace(self, chi=moved)
