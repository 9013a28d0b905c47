"""
Run loop: fixed-step integration with snapshots, conservation monitoring and
the near-vacuum / NaN guards.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator

from ..config import Formulation, RunStatus, settings
from ..errors import DynamicsAbort
from ..grid.states import ClassicalState, HydroState
from ..models.nonlinearity import NonlinearityModel
from ..observability.log_setup import get_logger
from ..observability.tracing import trace_stage
from .classical import STRANG, TRIPLE_JUMP, step_classical
from .conserved import classical_energy, hydro_energy, hydro_momentum
from .conversions import classical_to_hydro, hydro_to_classical
from .hydro import stable_dt, step_hydro

logger = get_logger("dynamics")


class IntegrationSettings(BaseModel):
    """Time-stepping policy for one run"""

    T: float = Field(gt=0.0)
    t_snap: float = Field(gt=0.0)
    dt: Optional[float] = Field(default=None, gt=0.0, description="Upper bound; capped by the stability rule")
    stability_constant: float = Field(default_factory=lambda: settings.stability_constant, gt=0.0)
    formulation: str = Formulation.HYDRO
    frame_speed: float = 0.0
    splitting: str = STRANG
    eta_max_threshold: float = Field(default_factory=lambda: settings.eta_max_threshold, gt=0.0, lt=1.0)

    @field_validator("formulation")
    @classmethod
    def _known_formulation(cls, value: str) -> str:
        if value not in (Formulation.HYDRO, Formulation.CLASSICAL):
            raise ValueError(f"unknown formulation '{value}'")
        return value

    @field_validator("splitting")
    @classmethod
    def _known_splitting(cls, value: str) -> str:
        if value not in (STRANG, TRIPLE_JUMP):
            raise ValueError(f"unknown splitting '{value}'")
        return value


@dataclass
class RunGuard:
    """Aborts a run before max eta reaches 1"""

    eta_max_threshold: float = 0.9
    status: str = RunStatus.OK

    def check_hydro(self, state: HydroState) -> None:
        if not state.is_finite():
            self.status = RunStatus.NAN_ABORT
            raise DynamicsAbort("non-finite values in state", status=self.status, time=state.time)
        if state.max_eta > self.eta_max_threshold:
            self.status = RunStatus.NEAR_VACUUM_ABORT
            raise DynamicsAbort("max eta above guard threshold", status=self.status,
                                max_eta=state.max_eta, threshold=self.eta_max_threshold, time=state.time)

    def check_classical(self, state: ClassicalState) -> None:
        if not np.all(np.isfinite(state.chi)):
            self.status = RunStatus.NAN_ABORT
            raise DynamicsAbort("non-finite values in field", status=self.status, time=state.time)
        max_eta = float(1.0 - np.min(state.density))
        if max_eta > self.eta_max_threshold:
            self.status = RunStatus.NEAR_VACUUM_ABORT
            raise DynamicsAbort("max eta above guard threshold", status=self.status,
                                max_eta=max_eta, threshold=self.eta_max_threshold, time=state.time)


@dataclass
class Trajectory:
    """Snapshots of one run, in the frame moving at `frame_speed`"""

    snapshots: List[HydroState] = field(default_factory=list)
    energy_series: List[float] = field(default_factory=list)
    momentum_series: List[float] = field(default_factory=list)
    classical_snapshots: Optional[List[ClassicalState]] = None
    status: str = RunStatus.OK
    dt: float = 0.0
    frame_speed: float = 0.0
    formulation: str = Formulation.HYDRO
    abort_reason: Optional[str] = None

    def append(self, state: HydroState, energy: float, classical: Optional[ClassicalState] = None) -> None:
        if self.snapshots and state.time <= self.snapshots[-1].time:
            raise ValueError("snapshot times must increase")
        self.snapshots.append(state)
        self.energy_series.append(energy)
        self.momentum_series.append(hydro_momentum(state))
        if classical is not None:
            if self.classical_snapshots is None:
                self.classical_snapshots = []
            self.classical_snapshots.append(classical)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])

    @property
    def energy_drift(self) -> np.ndarray:
        """|E(t) - E(0)| / |E(0)|"""
        energy = np.asarray(self.energy_series)
        if energy.size == 0:
            return energy
        scale = abs(energy[0]) if energy[0] != 0.0 else 1.0
        return np.abs(energy - energy[0]) / scale

    @property
    def momentum_drift(self) -> np.ndarray:
        """|p(t) - p(0)|"""
        momentum = np.asarray(self.momentum_series)
        return np.abs(momentum - momentum[0]) if momentum.size else momentum

    @property
    def last_good(self) -> Optional[HydroState]:
        return self.snapshots[-1] if self.snapshots else None

    @property
    def completed(self) -> bool:
        return self.status == RunStatus.OK

    def lab_shift(self, t: float) -> float:
        """Displacement of the frame at time t"""
        return self.frame_speed * t

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.times,
            "energy": self.energy_series,
            "momentum": self.momentum_series,
            "energy_drift": self.energy_drift,
            "momentum_drift": self.momentum_drift,
        })


def _schedule(config: IntegrationSettings, grid) -> tuple:
    """(dt, steps per snapshot, snapshot count) with dt <= C / k_max^2"""
    limit = stable_dt(grid, config.stability_constant)
    dt = min(config.dt, limit) if config.dt else limit
    per_snap = max(1, int(np.ceil(config.t_snap / dt - 1e-9)))
    dt = config.t_snap / per_snap
    n_snaps = int(round(config.T / config.t_snap))
    return dt, per_snap, n_snaps


@trace_stage("dynamics.run")
def run(initial: Union[HydroState, ClassicalState], T: float, model: NonlinearityModel,
        config: Optional[IntegrationSettings] = None, **overrides) -> Trajectory:
    """Integrate from `initial` up to time T

    Hydro runs step (eta, v) with RK4; classical runs step the twisted field
    and convert each snapshot back to (eta, v). An abort keeps every snapshot
    taken so far and records the status on the trajectory.
    """
    if config is None:
        config = IntegrationSettings(T=T, **overrides)
    else:
        config = config.model_copy(update={"T": T, **overrides})
    grid = initial.grid
    dt, per_snap, n_snaps = _schedule(config, grid)
    guard = RunGuard(config.eta_max_threshold)
    trajectory = Trajectory(dt=dt, frame_speed=config.frame_speed, formulation=config.formulation)
    logger.info("run started", extra={"formulation": config.formulation, "T": T, "dt": dt,
                                      "snapshots": n_snaps, "model": model.key})

    try:
        if config.formulation == Formulation.HYDRO:
            state = initial if isinstance(initial, HydroState) else classical_to_hydro(initial)
            guard.check_hydro(state)
            trajectory.append(state, hydro_energy(state, model))
            for _ in range(n_snaps):
                for _ in range(per_snap):
                    state = step_hydro(state, dt, model, config.frame_speed, config.eta_max_threshold)
                guard.check_hydro(state)
                trajectory.append(state, hydro_energy(state, model))
        else:
            field_state = initial if isinstance(initial, ClassicalState) else hydro_to_classical(initial)
            guard.check_classical(field_state)
            trajectory.append(classical_to_hydro(field_state), classical_energy(field_state, model), field_state)
            for _ in range(n_snaps):
                for _ in range(per_snap):
                    field_state = step_classical(field_state, dt, model, config.frame_speed, config.splitting)
                guard.check_classical(field_state)
                trajectory.append(classical_to_hydro(field_state), classical_energy(field_state, model),
                                  field_state)
    except DynamicsAbort as exc:
        trajectory.status = exc.status
        trajectory.abort_reason = exc.message
        logger.warning("run aborted", extra={"status": exc.status, "reason": exc.message,
                                             "last_good_time": trajectory.last_good.time
                                             if trajectory.last_good else None})
        return trajectory

    logger.info("run finished", extra={"status": trajectory.status,
                                       "energy_drift": float(trajectory.energy_drift[-1]),
                                       "momentum_drift": float(trajectory.momentum_drift[-1])})
    return trajectory
