"""
Transonic constants and the limiting constant-coefficient operator

    T_inf = [[-k1 d_x^2 + k2, k3], [k3, k0]]

with k0 = 2 nu^2 - k/3, k1 = -(k/4 + nu^2/2 + c^2 nu^2 / k0),
k3 = (c/2)(nu^2 + k/3), k2 = k3^2/k0 + 9 k1 nu^2 / 4. Its essential
spectrum starts at tau_c = lambda_-(0).
"""

from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np
from scipy import fft, linalg

from ..errors import WindowViolation
from ..grid.spectral_grid import Grid
from ..models.nonlinearity import NonlinearityModel, sound_speed, transonic_coefficient
from .linearized import OperatorMatrix


@dataclass(frozen=True)
class TransonicConstants:
    c: float
    c_s: float
    nu2: float
    k: float
    k0: float
    k1: float
    k2: float
    k3: float
    tau: float

    @property
    def tau_ratio(self) -> float:
        """tau_c / nu_c^2"""
        return self.tau / self.nu2

    @property
    def limit_exact(self) -> float:
        """Limit of tau_c / nu^2 as c -> c_s implied by the constant chain"""
        return -9.0 * self.k / (4.0 * (self.c_s ** 2 + 4.0))

    @property
    def limit_alternative(self) -> float:
        """The alternative closed form -k (c_s^2 + 4) / 4"""
        return -self.k * (self.c_s ** 2 + 4.0) / 4.0

    @property
    def identity_gap(self) -> float:
        """(k2 k0 - k3^2) - 9 k0 k1 nu^2 / 4, zero by construction of k2"""
        return (self.k2 * self.k0 - self.k3 ** 2) - 2.25 * self.k0 * self.k1 * self.nu2

    @property
    def sixteenth_gap(self) -> float:
        """Same identity with the factor 9/16 in place of 9/4"""
        return (self.k2 * self.k0 - self.k3 ** 2) - 0.5625 * self.k0 * self.k1 * self.nu2

    def lambda_minus(self, xi) -> np.ndarray:
        """Lower branch of the symbol of T_inf at frequency xi"""
        xi = np.asarray(xi, dtype=float)
        top = self.k1 * xi * xi + self.k2
        return 0.5 * (top + self.k0 - np.sqrt((top - self.k0) ** 2 + 4.0 * self.k3 ** 2))

    def bottom_vector(self) -> np.ndarray:
        """Unit null direction of the symbol at xi = 0 and lambda = tau_c"""
        vector = np.array([self.k3, self.tau - self.k2])
        return vector / np.linalg.norm(vector)

    def to_dict(self) -> Dict[str, float]:
        out = asdict(self)
        out.update(tau_ratio=self.tau_ratio, limit_exact=self.limit_exact,
                   limit_alternative=self.limit_alternative, identity_gap=self.identity_gap)
        return out


def transonic_constants(model: NonlinearityModel, c: float) -> TransonicConstants:
    """k0..k3 and tau_c at speed c; tau_c <= 0 is reported as a window violation"""
    c_s = sound_speed(model)
    k = transonic_coefficient(model)
    if not 0.0 < c < c_s:
        raise WindowViolation("speed outside (0, c_s)", c=c, c_s=c_s)
    if k >= 0.0:
        raise WindowViolation("transonic coefficient k must be negative", k=k)
    nu2 = c_s * c_s - c * c
    k0 = 2.0 * nu2 - k / 3.0
    k1 = -(k / 4.0 + nu2 / 2.0 + c * c * nu2 / k0)
    k3 = 0.5 * c * (nu2 + k / 3.0)
    k2 = k3 * k3 / k0 + 2.25 * k1 * nu2
    tau = 0.5 * ((k2 + k0) - np.sqrt((k2 - k0) ** 2 + 4.0 * k3 * k3))
    if not tau > 0.0:
        raise WindowViolation("tau_c is not positive", c=c, tau=tau, k0=k0, k1=k1, k2=k2, k3=k3)
    return TransonicConstants(c=float(c), c_s=c_s, nu2=nu2, k=k, k0=k0, k1=k1, k2=k2, k3=k3, tau=float(tau))


def assemble_T_limit(constants: TransonicConstants, grid: Grid) -> OperatorMatrix:
    """Dense T_inf with a Fourier second-derivative block"""
    n = grid.n
    symbol = -(2.0 * np.pi * fft.fftfreq(n, d=grid.dx)) ** 2
    second = linalg.circulant(np.real(fft.ifft(symbol)))
    second = 0.5 * (second + second.T)
    identity = np.eye(n)
    matrix = np.block([
        [-constants.k1 * second + constants.k2 * identity, constants.k3 * identity],
        [constants.k3 * identity, constants.k0 * identity],
    ])
    return OperatorMatrix(matrix=matrix, grid=grid, discretization="spectral",
                          metadata={"c": constants.c, "n": n, "L": grid.L})


def scan_lambda_minus(constants: TransonicConstants, grid: Grid) -> Dict[str, object]:
    """lambda_-(xi) on the grid wavenumbers, its minimum and monotonicity in |xi|"""
    xi = np.sort(np.abs(grid.rk))
    values = constants.lambda_minus(xi)
    return {
        "xi": xi,
        "lambda_minus": values,
        "minimum": float(values.min()),
        "argmin": float(xi[int(np.argmin(values))]),
        "nondecreasing": bool(np.all(np.diff(values) >= -1e-14 * max(1.0, abs(values).max()))),
    }
