"""
Linearized operator H_c = Hess(E - c p)(Q_c) and its finite-dimensional spectrum

Acting on eps = (eps_eta, eps_v):

    H_c eps = ( L_c eps_eta - c eps_v / (2B),  -c eps_eta / (2B) + B eps_v ),
    L_c u   = -(u' / (4B))' + M_c u,
    M_c     = -( eta''/(4B^2) + eta'^2/(4B^3) + f'(B)/2 ),   B = 1 - eta_c.

The divergence term is assembled as D^T diag(a) D, so every discretization is
exactly symmetric.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from scipy import linalg

from ..config import Discretization
from ..errors import OperatorError
from ..grid.spectral_grid import Grid, spectral_derivative
from ..grid.states import HydroState
from ..profile.traveling_wave import TravelingWave

NEGATIVE_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense symmetric 2n x 2n matrix on stacked (eta, v)"""

    matrix: np.ndarray
    grid: Grid
    discretization: str
    metadata: Dict[str, float] = field(default_factory=dict)

    @property
    def symmetry_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.T)))

    def block(self, row: int, col: int) -> np.ndarray:
        n = self.grid.n
        return self.matrix[row * n:(row + 1) * n, col * n:(col + 1) * n]

    def apply(self, state: HydroState) -> HydroState:
        return HydroState.from_stacked(self.matrix @ state.stacked(), self.grid, state.time)


def difference_matrix(grid: Grid, discretization: str = Discretization.FD4) -> np.ndarray:
    """First-derivative matrix D such that D^T diag(a) D ~ -(a u')'"""
    n, dx = grid.n, grid.dx
    column = np.zeros(n)
    if discretization == Discretization.FD2:
        column[0], column[n - 1] = -1.0 / dx, 1.0 / dx
    elif discretization == Discretization.FD4:
        # staggered: (27 (u[i+1] - u[i]) - (u[i+2] - u[i-1])) / (24 dx)
        column[0], column[1] = -27.0, 1.0
        column[n - 1], column[n - 2] = 27.0, -1.0
        column /= 24.0 * dx
    elif discretization == Discretization.SPECTRAL:
        m = np.arange(1, n)
        h = 2.0 * np.pi / n
        column[1:] = 0.5 * (-1.0) ** m / np.tan(0.5 * m * h) * (np.pi / grid.L)
    else:
        raise OperatorError("unknown discretization", discretization=discretization)
    return linalg.circulant(column)


def _stiffness_coefficient(b: np.ndarray, discretization: str) -> np.ndarray:
    """1/(4B) where D places its output (midpoints for the staggered stencils)"""
    if discretization == Discretization.FD2:
        mid = 0.5 * (b + np.roll(b, -1))
    elif discretization == Discretization.FD4:
        mid = (-np.roll(b, 1) + 9.0 * b + 9.0 * np.roll(b, -1) - np.roll(b, -2)) / 16.0
    else:
        mid = b
    return 0.25 / mid


def potential_term(wave: TravelingWave) -> np.ndarray:
    """M_c = -(eta''/(4B^2) + eta'^2/(4B^3) + f'(B)/2)"""
    b = wave.b
    return -(wave.eta_xx / (4.0 * b * b) + wave.eta_x ** 2 / (4.0 * b ** 3) + 0.5 * wave.model.fp(b))


def assemble_H_c(wave: TravelingWave, discretization: str = Discretization.FD4) -> OperatorMatrix:
    """Dense symmetric matrix of H_c on the wave's grid"""
    grid = wave.grid
    n = grid.n
    b = wave.b
    d = difference_matrix(grid, discretization)
    stiffness = d.T @ (_stiffness_coefficient(b, discretization)[:, None] * d)
    eta_block = stiffness + np.diag(potential_term(wave))
    coupling = np.diag(-wave.c / (2.0 * b))

    matrix = np.empty((2 * n, 2 * n))
    matrix[:n, :n] = 0.5 * (eta_block + eta_block.T)
    matrix[:n, n:] = coupling
    matrix[n:, :n] = coupling
    matrix[n:, n:] = np.diag(b)
    return OperatorMatrix(matrix=matrix, grid=grid, discretization=discretization,
                          metadata={"c": wave.c, "n": n, "L": grid.L})


def apply_H_c(wave: TravelingWave, eps: HydroState) -> HydroState:
    """Matrix-free H_c eps with Fourier derivatives"""
    grid = wave.grid
    b = wave.b
    flux = spectral_derivative(eps.eta, grid, 1) / (4.0 * b)
    eta_part = -spectral_derivative(flux, grid, 1) + potential_term(wave) * eps.eta - wave.c * eps.v / (2.0 * b)
    v_part = -wave.c * eps.eta / (2.0 * b) + b * eps.v
    return HydroState(eta_part, v_part, grid, eps.time)


def spectrum(operator: OperatorMatrix, count: int = 6):
    """Lowest `count` eigenpairs (ascending)"""
    size = operator.matrix.shape[0]
    count = min(count, size)
    return linalg.eigh(operator.matrix, subset_by_index=[0, count - 1])


def kernel_alignment(operator: OperatorMatrix, wave: TravelingWave, count: int = 4) -> tuple:
    """(|cos| angle between the eigenvector of smallest |lambda| and d_x Q_c, that eigenvalue)"""
    values, vectors = spectrum(operator, count)
    j = int(np.argmin(np.abs(values)))
    target = wave.derivative_state.stacked()
    vector = vectors[:, j]
    cosine = abs(float(vector @ target)) / (np.linalg.norm(vector) * np.linalg.norm(target))
    return cosine, float(values[j])


def kernel_residual(operator: OperatorMatrix, wave: TravelingWave) -> float:
    """||H_c d_x Q_c|| / ||d_x Q_c|| in l^2"""
    target = wave.derivative_state.stacked()
    return float(np.linalg.norm(operator.matrix @ target) / np.linalg.norm(target))


def energy_gram(grid: Grid, discretization: str = Discretization.FD4) -> np.ndarray:
    """Matrix of ||eps||_X^2 / dx on stacked point values"""
    n = grid.n
    d = difference_matrix(grid, discretization)
    gram = np.zeros((2 * n, 2 * n))
    gram[:n, :n] = d.T @ d + np.eye(n)
    gram[n:, n:] = np.eye(n)
    return gram


def constraint_vectors(wave: TravelingWave) -> List[np.ndarray]:
    """Stacked d_x Q_c and grad p(Q_c)"""
    return [wave.derivative_state.stacked(), wave.momentum_gradient.stacked()]


def coercivity_lc(operator: OperatorMatrix, constraints: Sequence[np.ndarray]) -> float:
    """min <H eps, eps> / ||eps||_X^2 over eps orthogonal to the constraints"""
    gram = energy_gram(operator.grid, operator.discretization)
    if len(constraints):
        basis = linalg.null_space(np.vstack(constraints))
        reduced = basis.T @ operator.matrix @ basis
        metric = basis.T @ gram @ basis
    else:
        reduced, metric = operator.matrix, gram
    value = linalg.eigh(0.5 * (reduced + reduced.T), 0.5 * (metric + metric.T),
                        subset_by_index=[0, 0], eigvals_only=True)
    return float(value[0])


def dual_variable(wave: TravelingWave, eps: HydroState) -> HydroState:
    """e~ = S H_c eps"""
    return apply_H_c(wave, eps).swapped()

