"""Time Integration (hydrodynamic RK4 and split-step classical)"""

from .hydro import hydro_rhs, step_hydro, stable_dt
from .classical import step_classical, STRANG, TRIPLE_JUMP
from .conversions import hydro_to_classical, classical_to_hydro
from .conserved import hydro_energy, hydro_momentum, classical_energy
from .runner import IntegrationSettings, RunGuard, Trajectory, run
from .dispersion import DispersionMeasurement, dispersion_relation, measure_dispersion

__all__ = [
    "hydro_rhs",
    "step_hydro",
    "stable_dt",
    "step_classical",
    "STRANG",
    "TRIPLE_JUMP",
    "hydro_to_classical",
    "classical_to_hydro",
    "hydro_energy",
    "hydro_momentum",
    "classical_energy",
    "IntegrationSettings",
    "RunGuard",
    "Trajectory",
    "run",
    "DispersionMeasurement",
    "dispersion_relation",
    "measure_dispersion",
]
