"""
Reduced forms of N_c and closed expressions along the traveling-wave branch

N_c(xi) = c^2 xi^2 - 4 (1 - xi) F(1 - xi) has a double root at xi = 0. All
profile quantities are evaluated through R(xi) = N_c(xi) / xi^2, which is
smooth and bounded away from that root, so exponentially small tails keep
full relative precision. Along the wave, eta' = -sign(x) eta mu with
mu = sqrt(-R(eta)); every coefficient below is a function of eta and sign(x).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..models.nonlinearity import (
    GL_NODES,
    GL_WEIGHTS,
    NonlinearityModel,
    potential_F,
    reduced_potential,
)


def reduced_n(model: NonlinearityModel, c: float, xi) -> Tuple[np.ndarray, np.ndarray]:
    """R(xi) = N_c(xi)/xi^2 and R'(xi)"""
    phi, dphi = reduced_potential(model, xi)
    xi = np.asarray(xi, dtype=float)
    r = c * c - 4.0 * (1.0 - xi) * phi
    dr = 4.0 * phi - 4.0 * (1.0 - xi) * dphi
    return r, dr


def n_c(model: NonlinearityModel, c: float, xi) -> np.ndarray:
    """N_c(xi) = c^2 xi^2 - 4 (1 - xi) F(1 - xi)"""
    xi = np.asarray(xi, dtype=float)
    return c * c * xi * xi - 4.0 * (1.0 - xi) * potential_F(model, 1.0 - xi)


def n_c_prime(model: NonlinearityModel, c: float, xi) -> np.ndarray:
    """N_c'(xi) = xi (2 R + xi R')"""
    xi = np.asarray(xi, dtype=float)
    r, dr = reduced_n(model, c, xi)
    return xi * (2.0 * r + xi * dr)


def n_c_second(model: NonlinearityModel, c: float, xi) -> np.ndarray:
    """N_c''(xi) = 2c^2 + 8 f(1 - xi) + 4 (1 - xi) f'(1 - xi)"""
    xi = np.asarray(xi, dtype=float)
    f, fp, _, _ = model.eval(1.0 - xi)
    return 2.0 * c * c + 8.0 * f + 4.0 * (1.0 - xi) * fp


def chord_mean(func, a: float, b) -> np.ndarray:
    """int_0^1 func(a - b u) du by Gauss-Legendre, vectorized in b"""
    b = np.atleast_1d(np.asarray(b, dtype=float))
    values = func(a - b[:, None] * GL_NODES[None, :])
    return values @ GL_WEIGHTS


@dataclass(frozen=True)
class BranchForms:
    """Closed expressions on the branch, sampled at eta with sign sigma"""

    c: float
    eta: np.ndarray
    sigma: np.ndarray
    r: np.ndarray
    dr: np.ndarray

    @classmethod
    def evaluate(cls, model: NonlinearityModel, c: float, eta: np.ndarray,
                 sigma: np.ndarray) -> "BranchForms":
        eta = np.clip(np.asarray(eta, dtype=float), 0.0, None)
        r, dr = reduced_n(model, c, eta)
        return cls(c=c, eta=eta, sigma=np.asarray(sigma, dtype=float), r=np.minimum(r, 0.0), dr=dr)

    @property
    def mu2(self) -> np.ndarray:
        return -self.r

    @property
    def mu(self) -> np.ndarray:
        return np.sqrt(self.mu2)

    @property
    def b(self) -> np.ndarray:
        return 1.0 - self.eta

    # eta derivatives
    @property
    def eta_x(self) -> np.ndarray:
        return -self.sigma * self.eta * self.mu

    @property
    def eta_xx_over_eta(self) -> np.ndarray:
        return self.mu2 - 0.5 * self.eta * self.dr

    # virial weights
    @property
    def m1(self) -> np.ndarray:
        return self.sigma * self.mu

    @property
    def m1_x(self) -> np.ndarray:
        return 0.5 * self.eta * self.dr

    @property
    def m2(self) -> np.ndarray:
        return self.c * self.sigma * self.eta * self.mu / (2.0 * self.b ** 2)

    # quadratic-form coefficients
    @property
    def q1_over_eta(self) -> np.ndarray:
        return self.dr * self.b + 2.0 * self.mu2

    @property
    def q1_tilde_over_eta(self) -> np.ndarray:
        b = self.b
        return (-(self.c ** 2) * self.mu2 / (b * b * self.q1_over_eta)
                + 0.75 * self.dr / b - 0.5 * self.mu2 / (b * b))

    @property
    def q2(self) -> np.ndarray:
        return -self.c * self.eta * self.dr

    @property
    def q3(self) -> np.ndarray:
        return 2.0 * self.c * self.sigma * self.eta * self.mu / self.b

    @property
    def q3_tilde(self) -> np.ndarray:
        """Coefficient of the cross term after completing the square, over eta"""
        return 0.5 * self.c * (self.mu2 / self.b - self.dr)

    @property
    def q4(self) -> np.ndarray:
        return -self.sigma * (self.mu ** 3 + self.c ** 2 * self.mu) / self.b

    @property
    def q5(self) -> np.ndarray:
        b, mu2, eta, c2 = self.b, self.mu2, self.eta, self.c ** 2
        rho2 = self.eta_xx_over_eta
        return (1.5 * mu2 * rho2 / b - 1.5 * mu2 ** 2 / b + eta * mu2 ** 2 / (2.0 * b * b)
                + c2 * rho2 / (2.0 * b) + c2 * eta ** 2 * mu2 / (2.0 * b * b) - 0.5 * c2 * mu2)
