"""
Modulation decomposition Q(. + a) = Q_c + eps with the two orthogonality
conditions <eps, d_x Q_c> = 0 and <eps, grad p(Q_c)> = 0, and its tracking
along a trajectory.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..config import settings
from ..dynamics.runner import Trajectory
from ..errors import ModulationError, ProfileError
from ..grid.norms import x_norm
from ..grid.states import HydroState
from ..observability.log_setup import get_logger
from ..profile.branch import ProfileBranch
from .phase import phase_theta

logger = get_logger("modulation")

# Once Newton steps stall at rounding level, this residual is still accepted
STALL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Decomposition:
    a: float
    c: float
    eps: HydroState
    residuals: Tuple[float, float]
    iterations: int

    @property
    def eps_xnorm(self) -> float:
        return x_norm(self.eps)


def _constraints(state: HydroState, branch: ProfileBranch, a: float, c: float) -> Tuple[np.ndarray, HydroState]:
    wave = branch.wave(c)
    eps = state.shifted(a) - wave.state
    values = np.array([eps.inner(wave.derivative_state), eps.inner(wave.momentum_gradient)])
    return values, eps


def _jacobian(state: HydroState, branch: ProfileBranch, a: float, c: float) -> np.ndarray:
    """Centered differences with steps (dx/4, 1e-4 nu_c)"""
    da = 0.25 * state.grid.dx
    dc = branch.speed_step(c)
    if c - dc <= 0.0 or c + dc >= branch.c_s:
        raise ModulationError("speed left the admissible range", last_iterate=(a, c))
    col_a = (_constraints(state, branch, a + da, c)[0] - _constraints(state, branch, a - da, c)[0]) / (2.0 * da)
    col_c = (_constraints(state, branch, a, c + dc)[0] - _constraints(state, branch, a, c - dc)[0]) / (2.0 * dc)
    return np.column_stack([col_a, col_c])


def decompose(state: HydroState, branch: ProfileBranch, guess: Tuple[float, float],
              tol: Optional[float] = None, max_iter: Optional[int] = None,
              radius: Optional[float] = None) -> Decomposition:
    """Newton iteration on the orthogonality conditions in (a, c)"""
    tol = settings.newton_tol if tol is None else tol
    max_iter = settings.newton_max_iter if max_iter is None else max_iter
    radius = settings.orbital_radius if radius is None else radius
    a, c = float(guess[0]), float(guess[1])

    try:
        values, eps = _constraints(state, branch, a, c)
        jacobian = None
        previous = np.inf
        for iteration in range(max_iter + 1):
            residual = float(np.max(np.abs(values)))
            if residual <= tol:
                break
            # refresh the Jacobian whenever the chord iteration slows down
            if jacobian is None or residual > 0.5 * previous:
                jacobian = _jacobian(state, branch, a, c)
            previous = residual
            if iteration == max_iter:
                raise ModulationError("left modulation neighborhood: Newton did not converge",
                                      last_iterate=(a, c), residual=residual)
            step = np.linalg.solve(jacobian, -values)
            a, c = a + float(step[0]), c + float(step[1])
            if not 0.0 < c < branch.c_s:
                raise ModulationError("left modulation neighborhood: speed outside (0, c_s)",
                                      last_iterate=(a, c))
            values, eps = _constraints(state, branch, a, c)
            stalled = abs(step[0]) <= 1e-14 * max(1.0, abs(a)) and abs(step[1]) <= 1e-15
            if stalled and float(np.max(np.abs(values))) <= STALL_TOLERANCE:
                break
    except ProfileError as exc:
        raise ModulationError("profile unavailable during decomposition", last_iterate=(a, c),
                              cause=exc.message) from exc
    except np.linalg.LinAlgError as exc:
        raise ModulationError("singular modulation Jacobian", last_iterate=(a, c)) from exc

    result = Decomposition(a=a, c=c, eps=eps, residuals=(float(values[0]), float(values[1])),
                           iterations=iteration)
    if result.eps_xnorm > radius:
        raise ModulationError("left modulation neighborhood: residual too large",
                              last_iterate=(a, c), eps_xnorm=result.eps_xnorm, radius=radius)
    return result


@dataclass
class ModulationTrack:
    """Modulation parameters along a trajectory; `a` is in the lab frame"""

    times: List[float] = field(default_factory=list)
    a: List[float] = field(default_factory=list)
    a_frame: List[float] = field(default_factory=list)
    c: List[float] = field(default_factory=list)
    eps_xnorm: List[float] = field(default_factory=list)
    ortho_residuals: List[Tuple[float, float]] = field(default_factory=list)
    eps: List[HydroState] = field(default_factory=list)
    theta: Optional[np.ndarray] = None
    theta_flags: Optional[np.ndarray] = None
    truncated: bool = False
    failure: Optional[dict] = None
    frame_speed: float = 0.0

    def __len__(self) -> int:
        return len(self.times)

    def add(self, t: float, frame_speed: float, result: Decomposition) -> None:
        self.times.append(float(t))
        self.a_frame.append(result.a)
        self.a.append(result.a + frame_speed * t)
        self.c.append(result.c)
        self.eps_xnorm.append(result.eps_xnorm)
        self.ortho_residuals.append(result.residuals)
        self.eps.append(result.eps)

    @property
    def a_dot_minus_c(self) -> np.ndarray:
        return _rate(self.times, self.a) - np.asarray(self.c)

    @property
    def c_dot(self) -> np.ndarray:
        return _rate(self.times, self.c)

    @property
    def max_ortho_residual(self) -> float:
        return float(np.max(np.abs(self.ortho_residuals))) if self.ortho_residuals else float("nan")

    @property
    def sup_eps(self) -> float:
        return float(np.max(self.eps_xnorm)) if self.eps_xnorm else float("nan")

    @property
    def parameter_control_ratio(self) -> float:
        """sup_t (|a' - c|^2 + |c'|) / sup_t ||eps||_X^2"""
        if len(self) < 3 or self.sup_eps == 0.0:
            return float("nan")
        return float(np.max(self.a_dot_minus_c ** 2 + np.abs(self.c_dot)) / self.sup_eps ** 2)

    @property
    def speed_control_ratio(self) -> float:
        """sup_t |c'| / sup_t ||eps||_X^2"""
        if len(self) < 3 or self.sup_eps == 0.0:
            return float("nan")
        return float(np.max(np.abs(self.c_dot)) / self.sup_eps ** 2)

    def to_dataframe(self) -> pd.DataFrame:
        n = len(self)
        theta = self.theta if self.theta is not None else np.full(n, np.nan)
        return pd.DataFrame({
            "t": self.times,
            "a": self.a,
            "c": self.c,
            "theta": theta[:n],
            "eps_xnorm": self.eps_xnorm,
            "a_dot_minus_c": self.a_dot_minus_c if n >= 2 else np.full(n, np.nan),
            "c_dot": self.c_dot if n >= 2 else np.full(n, np.nan),
        })


def _rate(times, values) -> np.ndarray:
    """Centered differences, one-sided at the ends"""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size < 2:
        return np.full(times.size, np.nan)
    return np.gradient(values, times, edge_order=1 if times.size < 3 else 2)


def track(trajectory: Trajectory, branch: ProfileBranch, guess: Tuple[float, float],
          bump_width: Optional[float] = None, mollify: bool = False) -> ModulationTrack:
    """Warm-started decomposition of every snapshot

    Failure at the first snapshot raises; later failures truncate the track.
    When the trajectory carries classical snapshots the phase theta(t) is
    attached as well.
    """
    result = ModulationTrack(frame_speed=trajectory.frame_speed)
    current = (float(guess[0]), float(guess[1]))
    previous_t = None
    for snapshot in trajectory.snapshots:
        if previous_t is not None:
            elapsed = snapshot.time - previous_t
            current = (current[0] + (current[1] - trajectory.frame_speed) * elapsed, current[1])
        try:
            decomposition = decompose(snapshot, branch, current)
        except ModulationError as exc:
            if not result.times:
                raise
            result.truncated = True
            result.failure = {"t": snapshot.time, **exc.to_dict()}
            logger.warning("modulation track truncated", extra={"t": snapshot.time, "error": exc.message})
            break
        result.add(snapshot.time, trajectory.frame_speed, decomposition)
        current = (decomposition.a, decomposition.c)
        previous_t = snapshot.time

    if trajectory.classical_snapshots:
        n = len(result)
        phase = phase_theta(trajectory.classical_snapshots[:n], result.a_frame,
                            branch.wave(result.c[0]), bump_width, mollify=mollify)
        result.theta = phase.theta
        result.theta_flags = phase.flags

    logger.info("modulation tracked", extra={"snapshots": len(result), "truncated": result.truncated,
                                             "sup_eps": result.sup_eps,
                                             "max_ortho_residual": result.max_ortho_residual})
    return result
