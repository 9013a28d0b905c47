"""
Shared fixtures: the cubic model, its exact soliton and small grids.

The cubic (Gross-Pitaevskii) model f(s) = 1 - s has c_s = sqrt(2) and the
closed-form branch

    eta_c = (nu^2 / 2) sech^2(nu x / 2),   v_c = c eta_c / (2 (1 - eta_c)),

which most numerical tests use as their oracle.
"""

import numpy as np
import pytest

from src.grid import Grid
from src.models import gross_pitaevskii
from src.profile import ProfileBranch, build_profile

SQRT2 = np.sqrt(2.0)


def gp_nu(c: float) -> float:
    return float(np.sqrt(2.0 - c * c))


def gp_eta(x: np.ndarray, c: float) -> np.ndarray:
    """Exact cubic dark-soliton profile"""
    nu = gp_nu(c)
    return 0.5 * nu * nu / np.cosh(0.5 * nu * x) ** 2


def gp_momentum(c: float) -> float:
    """p(Q_c) = atan(nu/c) - c nu / 2"""
    nu = gp_nu(c)
    return float(np.arctan(nu / c) - 0.5 * c * nu)


@pytest.fixture(scope="session")
def gp():
    return gross_pitaevskii()


@pytest.fixture(scope="session")
def grid():
    return Grid(1024, 40.0)


@pytest.fixture(scope="session")
def gp_wave(gp, grid):
    """Q_1 on [-40, 40), where nu = 1"""
    return build_profile(gp, 1.0, grid)


@pytest.fixture(scope="session")
def transonic_wave(gp):
    """Q_c close to the sound speed, box scaled to the slow tail"""
    c = 1.38
    return build_profile(gp, c, Grid(512, 40.0 / gp_nu(c)))


@pytest.fixture(scope="session")
def gp_branch(gp):
    """Branch around c = 1 with room for slightly faster neighbours"""
    return ProfileBranch(gp, Grid(512, 48.0))
