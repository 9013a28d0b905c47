"""
Time-windowed weighted integrals in the soliton frame

    weighted decay:  int_t^{t+1} int (eta'^2 + eta^2 + v^2)(s, x + a(s)) |x|^rho dx ds
    smoothing:       int_t^{t+1} int |d^l psi(s, x + a(s))|^2 (1 + |x|^r) dx ds

plus the localized-residual signature used for asymptotic stability.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import integrate

from ..config import settings
from ..dynamics.runner import Trajectory
from ..errors import DiagnosticsError
from ..grid.norms import weight
from ..grid.spectral_grid import spectral_derivative
from ..grid.states import ClassicalState, HydroState
from ..modulation.decomposition import ModulationTrack


@dataclass
class WindowReport:
    """Per-window integrals and their supremum"""

    name: str
    times: np.ndarray
    integrand: np.ndarray
    window_starts: np.ndarray
    window_values: np.ndarray

    @property
    def sup(self) -> float:
        return float(np.max(self.window_values)) if self.window_values.size else float("nan")

    @property
    def spread(self) -> float:
        """Relative spread of the window values"""
        if not self.window_values.size:
            return float("nan")
        return float(np.ptp(self.window_values) / max(abs(self.sup), 1e-300))

    def late_trend(self) -> float:
        """Slope of a linear fit over the second half of the windows"""
        half = self.window_values.size // 2
        if self.window_values.size - half < 2:
            return 0.0
        return float(np.polyfit(self.window_starts[half:], self.window_values[half:], 1)[0])


def _windows(times: np.ndarray, values: np.ndarray, width: float) -> tuple:
    starts, out = [], []
    for start in times:
        inside = (times >= start - 1e-12) & (times <= start + width + 1e-9)
        if times[inside][-1] < start + width - 1e-9:
            break
        starts.append(start)
        out.append(integrate.trapezoid(values[inside], times[inside]))
    return np.asarray(starts), np.asarray(out)


def energy_density_integral(state: HydroState, a: float, rho: float) -> float:
    """int (eta'^2 + eta^2 + v^2)(x + a) |x|^rho"""
    centred = state.shifted(a)
    eta_x = spectral_derivative(centred.eta, centred.grid, 1)
    w = weight(centred.grid, rho)
    return float(np.sum((eta_x ** 2 + centred.eta ** 2 + centred.v ** 2) * w) * centred.grid.dx)


def weighted_decay_report(trajectory: Trajectory, track: ModulationTrack, rho: float,
                          window: float = 1.0) -> WindowReport:
    """Unit-window integrals of the recentred weighted energy density"""
    if rho < 0.0 or rho > settings.r_max:
        raise DiagnosticsError("weight exponent outside [0, r_max]", rho=rho, r_max=settings.r_max)
    n = len(track)
    times = np.asarray(track.times)
    values = np.array([energy_density_integral(trajectory.snapshots[j], track.a_frame[j], rho)
                       for j in range(n)])
    starts, window_values = _windows(times, values, window)
    return WindowReport(name=f"weighted_decay_rho={rho:g}", times=times, integrand=values,
                        window_starts=starts, window_values=window_values)


def derivative_density_integral(state: ClassicalState, a: float, order: int, r: float) -> float:
    """int |d^l psi(x + a)|^2 (1 + |x|^r)"""
    centred = state.shifted(a)
    dpsi = centred.derivative(order)
    w = 1.0 + weight(centred.grid, r)
    return float(np.sum(np.abs(dpsi) ** 2 * w) * centred.grid.dx)


def smoothing_report(snapshots: Sequence[ClassicalState], positions: Sequence[float], order: int,
                     r: float, window: float = 1.0) -> WindowReport:
    """Unit-window integrals of |d^l psi|^2 (1 + |x|^r) in the soliton frame"""
    if not 1 <= order <= 4:
        raise DiagnosticsError("derivative order must lie in 1..4", order=order)
    times = np.array([s.time for s in snapshots])
    values = np.array([derivative_density_integral(s, a, order, r) for s, a in zip(snapshots, positions)])
    starts, window_values = _windows(times, values, window)
    return WindowReport(name=f"smoothing_l={order}_r={r:g}", times=times, integrand=values,
                        window_starts=starts, window_values=window_values)


def local_residual_norm(eps: HydroState, radius: float = 20.0) -> float:
    """X-norm of eps restricted to |x| <= radius"""
    near = np.abs(eps.grid.x) <= radius
    eta_x = spectral_derivative(eps.eta, eps.grid, 1)
    density = eta_x ** 2 + eps.eta ** 2 + eps.v ** 2
    return float(np.sqrt(np.sum(density[near]) * eps.grid.dx))


def asymptotic_signature(track: ModulationTrack, radius: float = 20.0, transient: float = 1.0,
                         theta_dot: Optional[np.ndarray] = None) -> Dict[str, float]:
    """Local decay of eps, convergence of c(t) and of theta'(t)"""
    times = np.asarray(track.times)
    local = np.array([local_residual_norm(e, radius) for e in track.eps])
    late = times >= times[0] + transient
    peak_index = int(np.argmax(np.where(late, local, -np.inf)))
    peak = float(local[peak_index])
    final = float(local[-1])

    speeds = np.asarray(track.c)
    variation = np.abs(np.diff(speeds))
    quarter = times[1:] >= times[0] + 0.75 * (times[-1] - times[0])
    total = float(np.sum(variation))
    last_quarter = float(np.sum(variation[quarter]))

    signature = {
        "local_peak": peak,
        "local_peak_time": float(times[peak_index]),
        "local_final": final,
        "local_decrease": 1.0 - final / peak if peak > 0.0 else 0.0,
        "c_total_variation": total,
        "c_last_quarter_variation": last_quarter,
        "c_variation_ratio": last_quarter / total if total > 0.0 else 0.0,
        "c_final": float(speeds[-1]),
    }
    if theta_dot is not None and theta_dot.size:
        signature["theta_dot_final"] = float(np.max(np.abs(theta_dot[quarter_index(times):])))
    return signature


def quarter_index(times: np.ndarray) -> int:
    """First index of the last quarter of the run"""
    return int(np.searchsorted(times, times[0] + 0.75 * (times[-1] - times[0])))


def weighted_decay_reports(trajectory: Trajectory, track: ModulationTrack,
                           rhos: Sequence[float]) -> List[WindowReport]:
    return [weighted_decay_report(trajectory, track, rho) for rho in rhos]
