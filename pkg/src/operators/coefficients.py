"""
Coefficient fields of the virial quadratic form and the virial weight

All fields are closed functions of eta_c and sign(x) (see BranchForms), so
their tails keep relative precision where eta_c underflows.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..errors import WindowViolation
from ..grid.spectral_grid import windowed_derivative
from ..grid.states import HydroState
from ..profile.traveling_wave import TravelingWave
from .linearized import apply_H_c


@dataclass(frozen=True, eq=False)
class QCoefficients:
    """q1..q5, q1~, m1, m2 and B_c sampled on the wave's grid"""

    wave: TravelingWave
    b: np.ndarray
    m1: np.ndarray
    m1_x: np.ndarray
    m2: np.ndarray
    q1: np.ndarray
    q1_tilde: np.ndarray
    q2: np.ndarray
    q3: np.ndarray
    q4: np.ndarray
    q5: np.ndarray
    q1_over_eta: np.ndarray
    q1_tilde_over_eta: np.ndarray

    @property
    def positivity(self) -> Dict[str, float]:
        return {"q1_over_eta_min": float(np.min(self.q1_over_eta)),
                "q1_tilde_over_eta_min": float(np.min(self.q1_tilde_over_eta))}

    def identity_residual(self) -> float:
        """max |-q4'/2 + q5| on |x| <= L/2"""
        grid = self.wave.grid
        inner = np.abs(grid.x) <= 0.5 * grid.L
        residual = -0.5 * windowed_derivative(self.q4, grid, 1) + self.q5
        return float(np.max(np.abs(residual[inner])))

    def tail_limits(self, distance: float = 30.0) -> Dict[str, float]:
        """q1/eta_c and q1~/eta_c at |x| = distance / nu_c (right side)"""
        grid = self.wave.grid
        j = int(np.argmin(np.abs(grid.x - distance / self.wave.nu)))
        return {"x": float(grid.x[j]), "q1_over_eta": float(self.q1_over_eta[j]),
                "q1_tilde_over_eta": float(self.q1_tilde_over_eta[j])}


def q_coefficients(wave: TravelingWave) -> QCoefficients:
    """Evaluate the coefficient fields; q1 vanishing means c is outside the window"""
    forms = wave.forms()
    eta = forms.eta
    q1_ratio = forms.q1_over_eta
    if np.min(q1_ratio) <= 0.0:
        raise WindowViolation("q1 vanishes on the grid; speed outside validated window",
                              c=wave.c, q1_over_eta_min=float(np.min(q1_ratio)))
    q1_tilde_ratio = forms.q1_tilde_over_eta
    return QCoefficients(
        wave=wave, b=forms.b, m1=forms.m1, m1_x=forms.m1_x, m2=forms.m2,
        q1=eta * q1_ratio, q1_tilde=eta * q1_tilde_ratio,
        q2=forms.q2, q3=forms.q3, q4=forms.q4, q5=forms.q5,
        q1_over_eta=q1_ratio, q1_tilde_over_eta=q1_tilde_ratio,
    )


def sum_of_squares(coefficients: QCoefficients, e_tilde: HydroState) -> float:
    """int q1 (e_v + q2/(2q1) e_eta + q3/(2q1) e_eta')^2 + q1~ (e_eta' + m1 e_eta)^2"""
    grid = e_tilde.grid
    forms = coefficients.wave.forms()
    e_eta, e_v = e_tilde.eta, e_tilde.v
    e_eta_x = windowed_derivative(e_eta, grid, 1)
    ratio = forms.q1_over_eta
    # q2/(2 q1) and q3/(2 q1) with eta cancelled
    a2 = -forms.c * forms.dr / (2.0 * ratio)
    a3 = forms.c * forms.sigma * forms.mu / (forms.b * ratio)
    first = coefficients.q1 * (e_v + a2 * e_eta + a3 * e_eta_x) ** 2
    second = coefficients.q1_tilde * (e_eta_x + coefficients.m1 * e_eta) ** 2
    return float(np.sum(first + second) * grid.dx)


def virial_flux_form(coefficients: QCoefficients, e_tilde: HydroState) -> float:
    """-4 <M_c S H_c d_x e~, e~> with M_c = [[m1, m2], [m2, 0]]"""
    wave = coefficients.wave
    grid = e_tilde.grid
    derivative = HydroState(windowed_derivative(e_tilde.eta, grid, 1),
                            windowed_derivative(e_tilde.v, grid, 1), grid)
    image = apply_H_c(wave, derivative).swapped()
    weighted = HydroState(coefficients.m1 * image.eta + coefficients.m2 * image.v,
                          coefficients.m2 * image.eta, grid)
    return -4.0 * weighted.inner(e_tilde)


@dataclass(frozen=True, eq=False)
class VirialWeight:
    """N(x) = [[0, x], [x, 0]] + gamma [[m1, m2], [m2, 0]]"""

    gamma: float
    x: np.ndarray
    m1: np.ndarray
    m2: np.ndarray

    @property
    def n11(self) -> np.ndarray:
        return self.gamma * self.m1

    @property
    def n12(self) -> np.ndarray:
        return self.x + self.gamma * self.m2

    @property
    def mc_sup(self) -> float:
        """sup_x of the largest eigenvalue modulus of [[m1, m2], [m2, 0]]"""
        spread = np.sqrt(0.25 * self.m1 ** 2 + self.m2 ** 2)
        return float(np.max(np.abs(0.5 * self.m1) + spread))

    def quadratic(self, e_tilde: HydroState) -> float:
        """n = <N e~, e~>"""
        density = self.n11 * e_tilde.eta ** 2 + 2.0 * self.n12 * e_tilde.eta * e_tilde.v
        return float(np.sum(density) * e_tilde.grid.dx)

    def bound(self, e_tilde: HydroState) -> float:
        """2 ||sqrt|x| e~||^2 + 2 gamma ||M_c||_inf ||e~||^2"""
        grid = e_tilde.grid
        weighted = np.sum(np.abs(self.x) * (e_tilde.eta ** 2 + e_tilde.v ** 2)) * grid.dx
        plain = np.sum(e_tilde.eta ** 2 + e_tilde.v ** 2) * grid.dx
        return float(2.0 * weighted + 2.0 * abs(self.gamma) * self.mc_sup * plain)

    def mc_image(self, state: HydroState) -> HydroState:
        """M_c applied pointwise"""
        return HydroState(self.m1 * state.eta + self.m2 * state.v, self.m2 * state.eta, state.grid)


def virial_matrix(wave: TravelingWave, gamma: float) -> VirialWeight:
    """Pointwise virial weight around the soliton at x = 0"""
    forms = wave.forms()
    return VirialWeight(gamma=float(gamma), x=np.array(wave.grid.x), m1=forms.m1, m2=forms.m2)
