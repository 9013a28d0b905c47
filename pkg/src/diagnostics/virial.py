"""
Virial functional n(t) = <N e~, e~> along a tracked run, with e~ = S H_c eps
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import integrate

from ..grid.norms import x_norm_squared
from ..grid.states import HydroState
from ..modulation.decomposition import ModulationTrack
from ..observability.log_setup import get_logger
from ..operators.coefficients import virial_matrix
from ..operators.linearized import dual_variable
from ..profile.branch import ProfileBranch

logger = get_logger("diagnostics")

GAMMA_SCAN = (1.0, 3.0, 10.0, 30.0, 100.0)
NEGLIGIBLE = 1e-24


@dataclass
class DualSeries:
    """e~(t) with the wave it was computed against"""

    times: np.ndarray
    speeds: np.ndarray
    duals: List[HydroState]
    norms2: np.ndarray
    kernel_pairing: np.ndarray
    mc_pairing: np.ndarray


def dual_series(track: ModulationTrack, branch: ProfileBranch) -> DualSeries:
    """e~ = S H_c(t) eps(t) per accepted snapshot"""
    duals, norms2, kernel, mc = [], [], [], []
    for c, eps in zip(track.c, track.eps):
        wave = branch.wave(c)
        dual = dual_variable(wave, eps)
        duals.append(dual)
        norms2.append(x_norm_squared(dual))
        kernel.append(dual.inner(wave.derivative_state.swapped()))
        mc.append(dual.inner(virial_matrix(wave, 1.0).mc_image(wave.state)))
    return DualSeries(times=np.asarray(track.times), speeds=np.asarray(track.c), duals=duals,
                      norms2=np.asarray(norms2), kernel_pairing=np.asarray(kernel), mc_pairing=np.asarray(mc))


@dataclass
class VirialReport:
    gamma: float
    times: np.ndarray
    n_series: np.ndarray
    n_rate: np.ndarray
    e_tilde_xnorm2: np.ndarray
    bound_series: np.ndarray
    transient: float
    kernel_pairing: np.ndarray = field(default_factory=lambda: np.zeros(0))
    mc_pairing: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def ratio(self) -> np.ndarray:
        """n'(t) / ||e~(t)||_X^2, NaN where e~ vanishes"""
        out = np.full(self.times.size, np.nan)
        live = self.e_tilde_xnorm2 > NEGLIGIBLE
        out[live] = self.n_rate[live] / self.e_tilde_xnorm2[live]
        return out

    @property
    def min_ratio_after_transient(self) -> float:
        late = (self.times >= self.times[0] + self.transient) & np.isfinite(self.ratio)
        return float(np.min(self.ratio[late])) if late.any() else float("nan")

    @property
    def integrated_dual_norm(self) -> float:
        """int_0^T ||e~||_X^2 dt"""
        if self.times.size < 2:
            return 0.0
        return float(integrate.trapezoid(self.e_tilde_xnorm2, self.times))

    @property
    def sup_n(self) -> float:
        return float(np.max(np.abs(self.n_series))) if self.n_series.size else 0.0

    @property
    def bound_holds(self) -> bool:
        """|n(t)| <= 2 ||sqrt|x| e~||^2 + 2 gamma ||M_c||_inf ||e~||^2"""
        return bool(np.all(np.abs(self.n_series) <= self.bound_series * (1.0 + 1e-12) + 1e-300))

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.times,
            "n": self.n_series,
            "n_rate": self.n_rate,
            "e_tilde_xnorm2": self.e_tilde_xnorm2,
            "ratio": self.ratio,
        })

    def summary(self) -> Dict[str, float]:
        return {"gamma": self.gamma, "min_ratio_after_transient": self.min_ratio_after_transient,
                "integrated_dual_norm": self.integrated_dual_norm, "sup_n": self.sup_n,
                "bound_holds": self.bound_holds,
                "max_kernel_pairing": float(np.max(np.abs(self.kernel_pairing))) if self.kernel_pairing.size else 0.0,
                "max_mc_pairing": float(np.max(np.abs(self.mc_pairing))) if self.mc_pairing.size else 0.0}


def _virial_from_duals(duals: DualSeries, branch: ProfileBranch, gamma: float, transient: float) -> VirialReport:
    n_values, bounds = [], []
    for c, dual in zip(duals.speeds, duals.duals):
        weight = virial_matrix(branch.wave(c), gamma)
        n_values.append(weight.quadratic(dual))
        bounds.append(weight.bound(dual))
    n_values = np.asarray(n_values)
    rate = np.gradient(n_values, duals.times) if n_values.size >= 2 else np.full(n_values.size, np.nan)
    return VirialReport(gamma=float(gamma), times=duals.times, n_series=n_values, n_rate=rate,
                        e_tilde_xnorm2=duals.norms2, bound_series=np.asarray(bounds), transient=transient,
                        kernel_pairing=duals.kernel_pairing, mc_pairing=duals.mc_pairing)


def virial_series(track: ModulationTrack, branch: ProfileBranch, gamma: float,
                  transient: float = 1.0, duals: Optional[DualSeries] = None) -> VirialReport:
    """n(t), n'(t) by centered differences, and n'/||e~||_X^2"""
    duals = duals if duals is not None else dual_series(track, branch)
    report = _virial_from_duals(duals, branch, gamma, transient)
    logger.info("virial series", extra=report.summary())
    return report


def scan_gamma(track: ModulationTrack, branch: ProfileBranch, gammas: Sequence[float] = GAMMA_SCAN,
               transient: float = 1.0) -> Tuple[Optional[float], Dict[float, VirialReport]]:
    """Smallest gamma whose ratio stays positive after the transient"""
    duals = dual_series(track, branch)
    reports = {float(g): _virial_from_duals(duals, branch, g, transient) for g in gammas}
    chosen = None
    for gamma in sorted(reports):
        if reports[gamma].min_ratio_after_transient > 0.0:
            chosen = gamma
            break
    logger.info("gamma scan", extra={"chosen": chosen,
                                     "min_ratios": {str(g): r.min_ratio_after_transient
                                                    for g, r in reports.items()}})
    return chosen, reports
