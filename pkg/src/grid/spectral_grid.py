"""
Uniform periodic grid and Fourier calculus on x in [-L, L)
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy import fft

from ..errors import GridError

MAX_DERIVATIVE_ORDER = 4


@dataclass(frozen=True)
class Grid:
    """n points on [-L, L), periodic"""

    n: int
    L: float

    def __post_init__(self):
        if self.n < 256 or self.n & (self.n - 1):
            raise GridError("grid size must be a power of two >= 256", n=self.n)
        if not self.L > 0.0:
            raise GridError("half-length must be positive", L=self.L)
        object.__setattr__(self, "L", float(self.L))

    @classmethod
    def for_speed(cls, nu: float, n: int = 2048, span: float = 40.0) -> "Grid":
        """Box scaled to the tail decay rate, L = span / nu"""
        return cls(n=n, L=span / nu)

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def key(self) -> str:
        return f"n={self.n},L={self.L!r}"

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.L + self.dx * np.arange(self.n)
        x.setflags(write=False)
        return x

    @cached_property
    def origin(self) -> int:
        """Index of x = 0"""
        return self.n // 2

    @cached_property
    def k(self) -> np.ndarray:
        """Full-spectrum wavenumbers (complex FFT ordering)"""
        return 2.0 * np.pi * fft.fftfreq(self.n, d=self.dx)

    @cached_property
    def rk(self) -> np.ndarray:
        """Half-spectrum wavenumbers (real FFT ordering)"""
        return 2.0 * np.pi * fft.rfftfreq(self.n, d=self.dx)

    @property
    def k_max(self) -> float:
        return np.pi / self.dx

    @cached_property
    def dealias(self) -> np.ndarray:
        """Two-thirds rule mask on the half spectrum"""
        return np.abs(self.rk) <= (2.0 / 3.0) * self.k_max

    def multiplier(self, order: int, real: bool = True, offset: float = 0.0) -> np.ndarray:
        """(i(k - offset))^order; the Nyquist entry is dropped for odd orders"""
        if order < 0 or order > MAX_DERIVATIVE_ORDER:
            raise GridError("derivative order out of range", order=order)
        k = (self.rk if real else self.k) - offset
        m = (1j * k) ** order
        if order % 2:
            nyquist = self.n // 2
            if real:
                m[-1] = 0.0
            else:
                m[nyquist] = 0.0
        return m


def spectral_derivative(field: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Fourier-multiplier derivative of a periodic field"""
    if order == 0:
        return np.array(field, copy=True)
    if np.iscomplexobj(field):
        return fft.ifft(grid.multiplier(order, real=False) * fft.fft(field))
    return fft.irfft(grid.multiplier(order) * fft.rfft(field), n=grid.n)


def derivatives(field: np.ndarray, grid: Grid, orders: Tuple[int, ...] = (1, 2)) -> Tuple[np.ndarray, ...]:
    """Several derivatives of a real field from one transform"""
    spectrum = fft.rfft(field)
    return tuple(fft.irfft(grid.multiplier(m) * spectrum, n=grid.n) for m in orders)


def windowed_derivative(field: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Derivative of a field whose two ends do not match

    The field is tapered to zero beyond |x| = 0.75 L before differentiating,
    so the result is exact on |x| <= L/2 and free of wrap-around ringing.
    """
    width = grid.L / 60.0
    window = 0.5 * (1.0 - np.tanh((np.abs(grid.x) - 0.75 * grid.L) / width))
    return spectral_derivative(window * field, grid, order)


def shift(field: np.ndarray, grid: Grid, a: float) -> np.ndarray:
    """Return field(x + a) by trigonometric interpolation"""
    if a == 0.0:
        return np.array(field, copy=True)
    if np.iscomplexobj(field):
        phase = np.exp(1j * grid.k * a)
        phase[grid.n // 2] = np.cos(grid.k[grid.n // 2] * a)
        return fft.ifft(phase * fft.fft(field))
    phase = np.exp(1j * grid.rk * a)
    phase[-1] = np.cos(grid.rk[-1] * a)
    return fft.irfft(phase * fft.rfft(field), n=grid.n)


def resample(field: np.ndarray, source: Grid, target: Grid) -> np.ndarray:
    """Trigonometric interpolation onto a grid with the same box"""
    if abs(source.L - target.L) > 1e-12 * source.L:
        raise GridError("resampling requires equal box half-lengths", source=source.L, target=target.L)
    if source.n == target.n:
        return np.array(field, copy=True)
    spectrum = fft.rfft(field)
    out = np.zeros(target.n // 2 + 1, dtype=complex)
    m = min(source.n, target.n) // 2
    out[:m] = spectrum[:m]
    # shared Nyquist-level mode is split evenly
    out[m] = 0.5 * spectrum[m] if target.n > source.n else spectrum[m]
    return fft.irfft(out, n=target.n) * (target.n / source.n)


def integrate(field: np.ndarray, grid: Grid) -> float:
    """Trapezoid rule on the periodic box"""
    return float(np.sum(field) * grid.dx)


def cumulative_integral(field: np.ndarray, grid: Grid) -> Tuple[np.ndarray, float]:
    """Return (int_0^x field, mean of field) by spectral quadrature

    The primitive splits into the mean times x plus a periodic part built from
    the non-zero modes.
    """
    spectrum = fft.rfft(field)
    mean = float(spectrum[0].real / grid.n)
    inv = np.zeros_like(spectrum)
    nz = grid.rk != 0.0
    inv[nz] = spectrum[nz] / (1j * grid.rk[nz])
    inv[-1] = 0.0
    periodic = fft.irfft(inv, n=grid.n)
    primitive = mean * grid.x + periodic - periodic[grid.origin]
    return primitive, mean


def frame_coordinate(grid: Grid, a: float) -> np.ndarray:
    """x - a wrapped into [-L, L)"""
    return np.mod(grid.x - a + grid.L, 2.0 * grid.L) - grid.L


def mirror(field: np.ndarray) -> np.ndarray:
    """field(-x) on the grid (index j -> n - j)"""
    return np.roll(field[::-1], 1)
