"""
Traveling-wave profiles

The dark soliton of speed c has eta_c even, maximal at x = 0 with
eta_c(0) = xi_c, and solves (eta')^2 = -N_c(eta). The profile is obtained by
integrating the first-order equation for x > 0 in two pieces:

* near the turning point, eta = xi_c - s^2 with ds/dx = sqrt(G(s)) / 2 and
  G(s) = int_0^1 N_c'(xi_c - s^2 u) du, which is smooth at s = 0;
* below eta = xi_c / 2, the log variable l = ln(eta) with dl/dx = -sqrt(-R(eta)),
  which keeps relative accuracy down the exponential tail.

Both pieces are evaluated at |x| of every grid point, so the profile is even
on the grid by construction.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy import integrate, optimize

from ..config import settings
from ..errors import ProfileError
from ..grid.spectral_grid import Grid, cumulative_integral, derivatives, spectral_derivative
from ..grid.states import ClassicalState, HydroState
from ..models.nonlinearity import NonlinearityModel, sound_speed
from ..observability.log_setup import get_logger
from .reduced import BranchForms, chord_mean, n_c_prime, reduced_n

logger = get_logger("profile")

_XI_SCAN_POINTS = 4000


@dataclass(frozen=True, eq=False)
class TravelingWave:
    """Sampled profile (eta_c, v_c) of speed c on a grid"""

    model: NonlinearityModel
    c: float
    c_s: float
    nu: float
    xi: float
    grid: Grid
    eta: np.ndarray
    eta_x: np.ndarray
    eta_xx: np.ndarray
    eta_xxx: np.ndarray
    v: np.ndarray
    v_x: np.ndarray
    decay_rate_fit: float
    amplitude_Mc: float
    ode_residual: float
    first_integral_residual: float
    turning_x: float
    metadata: Dict[str, float] = field(default_factory=dict)

    @property
    def state(self) -> HydroState:
        """Q_c"""
        return HydroState(self.eta, self.v, self.grid)

    @property
    def derivative_state(self) -> HydroState:
        """d_x Q_c"""
        return HydroState(self.eta_x, self.v_x, self.grid)

    @property
    def momentum_gradient(self) -> HydroState:
        """grad p(Q_c) = (v_c, eta_c) / 2"""
        return HydroState(0.5 * self.v, 0.5 * self.eta, self.grid)

    @property
    def b(self) -> np.ndarray:
        return 1.0 - self.eta

    def forms(self) -> BranchForms:
        """Closed branch expressions at the grid points"""
        return BranchForms.evaluate(self.model, self.c, self.eta, np.sign(self.grid.x))


def _check_speed(model: NonlinearityModel, c: float) -> float:
    c_s = sound_speed(model)
    if not 0.0 < c < c_s:
        raise ProfileError("speed outside (0, c_s)", c=c, c_s=c_s)
    return c_s


def xi_c(model: NonlinearityModel, c: float) -> float:
    """Smallest root of N_c in (0, 1)"""
    _check_speed(model, c)

    def reduced(xi: float) -> float:
        return float(reduced_n(model, c, xi)[0])

    grid = np.linspace(0.0, 1.0, _XI_SCAN_POINTS + 1)[1:]
    values, _ = reduced_n(model, c, grid)
    positive = np.nonzero(values >= 0.0)[0]
    if positive.size == 0:
        raise ProfileError("no transonic wave at this speed", c=c, model=model.key)
    j = int(positive[0])
    lo = 0.0 if j == 0 else float(grid[j - 1])
    hi = float(grid[j])
    if values[j] == 0.0:
        root = hi
    else:
        root = optimize.brentq(reduced, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
    if root >= 1.0:
        raise ProfileError("no transonic wave at this speed", c=c, model=model.key)
    slope = float(reduced_n(model, c, root)[1])
    if slope <= 0.0:
        raise ProfileError("degenerate turning point: N_c has a multiple root", c=c, xi=root)
    return float(root)


def _turning_rate(model: NonlinearityModel, c: float, xi: float, s) -> np.ndarray:
    """G(s) = int_0^1 N_c'(xi - s^2 u) du"""
    return chord_mean(lambda e: n_c_prime(model, c, e), xi, np.square(s))


def _reduced_slope_mean(model: NonlinearityModel, c: float, xi: float, s) -> np.ndarray:
    """int_0^1 R'(xi - s^2 u) du, so that -R(xi - s^2) = s^2 times this"""
    return chord_mean(lambda e: reduced_n(model, c, e)[1], xi, np.square(s))


def _solve_profile(model: NonlinearityModel, c: float, xi: float, nu: float,
                   x_eval: np.ndarray, x_end: float) -> tuple:
    """eta at the (non-negative) abscissae x_eval"""
    s_switch = np.sqrt(0.5 * xi)

    def turning_rhs(_x, y):
        return [0.5 * np.sqrt(max(float(_turning_rate(model, c, xi, y[0])[0]), 0.0))]

    def reached_half(_x, y):
        return y[0] - s_switch

    reached_half.terminal = True
    reached_half.direction = 1

    near = integrate.solve_ivp(
        turning_rhs, (0.0, x_end), [0.0], method="DOP853", dense_output=True,
        events=reached_half, rtol=settings.profile_rtol, atol=settings.profile_atol,
    )
    if not near.success or near.t_events[0].size == 0:
        raise ProfileError("turning-point integration did not reach eta = xi/2", c=c,
                           message=near.message)
    x_turn = float(near.t_events[0][0])

    def tail_rhs(_x, y):
        r, _ = reduced_n(model, c, np.exp(y[0]))
        return [-np.sqrt(max(-float(r), 0.0))]

    far = integrate.solve_ivp(
        tail_rhs, (x_turn, max(x_end, x_turn + 1.0)), [np.log(0.5 * xi)], method="DOP853",
        dense_output=True, rtol=settings.profile_rtol, atol=1e-13,
    )
    if not far.success:
        raise ProfileError("tail integration failed", c=c, message=far.message)

    eta = np.empty_like(x_eval)
    inner = x_eval <= x_turn
    if np.any(inner):
        s = near.sol(x_eval[inner])[0]
        eta[inner] = xi - s * s
    if np.any(~inner):
        eta[~inner] = np.exp(far.sol(x_eval[~inner])[0])
    return eta, x_turn


def _tail_window(grid: Grid, nu: float, lo: float, hi: float) -> np.ndarray:
    x = grid.x
    return (x >= lo / nu) & (x <= min(hi / nu, 0.9 * grid.L))


def assemble_wave(model: NonlinearityModel, c: float, grid: Grid, eta: np.ndarray,
                  xi: float, x_turn: float = float("nan")) -> TravelingWave:
    """Derive v_c, derivatives and residual metadata from a sampled eta_c"""
    c_s = sound_speed(model)
    nu = float(np.sqrt(c_s * c_s - c * c))
    eta_x, eta_xx, eta_xxx = derivatives(eta, grid, (1, 2, 3))
    v = c * eta / (2.0 * (1.0 - eta))
    v_x = spectral_derivative(v, grid, 1)

    r, dr = reduced_n(model, c, eta)
    n_prime = eta * (2.0 * r + eta * dr)
    ode_res = np.abs(-eta_xx - 0.5 * n_prime)
    first_res = np.abs(eta_x ** 2 + eta * eta * r)
    worst = int(np.argmax(ode_res))

    tail = _tail_window(grid, nu, 10.0, 30.0) & (eta > 1e-280)
    decay_fit = float("nan")
    if tail.sum() >= 2:
        decay_fit = float(np.polyfit(grid.x[tail], np.log(eta[tail]), 1)[0])
    far = _tail_window(grid, nu, 20.0, 30.0) & (eta > 1e-280)
    if far.sum() == 0:
        far = tail
    amplitude = float(np.mean(eta[far] * np.exp(nu * grid.x[far]))) if far.any() else float("nan")

    wave = TravelingWave(
        model=model, c=float(c), c_s=c_s, nu=nu, xi=float(xi), grid=grid,
        eta=eta, eta_x=eta_x, eta_xx=eta_xx, eta_xxx=eta_xxx, v=v, v_x=v_x,
        decay_rate_fit=decay_fit, amplitude_Mc=amplitude,
        ode_residual=float(ode_res[worst]), first_integral_residual=float(np.max(first_res)),
        turning_x=x_turn,
        metadata={"ode_residual_x": float(grid.x[worst])},
    )
    for arr in (wave.eta, wave.eta_x, wave.eta_xx, wave.eta_xxx, wave.v, wave.v_x):
        arr.setflags(write=False)
    return wave


def build_profile(model: NonlinearityModel, c: float, grid: Grid,
                  residual_tol: Optional[float] = None) -> TravelingWave:
    """Construct the traveling wave of speed c sampled on grid"""
    c_s = _check_speed(model, c)
    nu = float(np.sqrt(c_s * c_s - c * c))
    if grid.L * nu < settings.profile_min_half_length:
        raise ProfileError("box too short for the tail decay: need L >= 40/nu_c",
                           L=grid.L, nu=nu, required=settings.profile_min_half_length / nu)
    xi = xi_c(model, c)
    eta, x_turn = _solve_profile(model, c, xi, nu, np.abs(grid.x), grid.L)
    wave = assemble_wave(model, c, grid, eta, xi, x_turn)

    tol = settings.profile_residual_tol if residual_tol is None else residual_tol
    if wave.ode_residual > tol:
        raise ProfileError("profile ODE residual above tolerance", c=c,
                           residual=wave.ode_residual, x=wave.metadata["ode_residual_x"], tol=tol)
    logger.debug("profile built", extra={"model": model.key, "c": c, "xi": xi,
                                         "ode_residual": wave.ode_residual})
    return wave


def classical_wave(wave: TravelingWave) -> ClassicalState:
    """u_c = sqrt(1 - eta_c) exp(-i int_0^x v_c), stored with its twist"""
    if np.min(wave.b) <= 0.0:
        raise ProfileError("profile reaches vacuum; classical field undefined", c=wave.c)
    phase, mean = cumulative_integral(wave.v, wave.grid)
    chi = np.sqrt(wave.b) * np.exp(-1j * (phase - mean * wave.grid.x))
    return ClassicalState(
        chi=chi, grid=wave.grid, twist=mean,
        metadata={"phase_jump": mean * 2.0 * wave.grid.L, "c": wave.c},
    )


# ---------------------------------------------------------------------------
# Branch quantities by quadrature in eta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmplitudeEstimate:
    """Tail amplitude M_c in eta_c ~ M_c exp(-nu_c |x|)"""

    c: float
    xi: float
    nu: float
    formula: float
    tail_fit: Optional[float]

    @property
    def ratio_to_xi(self) -> float:
        return self.formula / self.xi

    @property
    def asymptotic_ratio(self) -> float:
        """M_c / (xi_c exp(nu^2 / (1 + nu)))"""
        return self.formula / (self.xi * np.exp(self.nu ** 2 / (1.0 + self.nu)))

    @property
    def fit_agreement(self) -> Optional[float]:
        if self.tail_fit is None:
            return None
        return abs(self.tail_fit - self.formula) / self.formula


def amplitude_Mc(model: NonlinearityModel, c: float, grid: Optional[Grid] = None) -> AmplitudeEstimate:
    """M_c = xi_c exp(int_0^xi_c N_{c_s}(t) / (t sqrt(-N_c) (sqrt(-N_c) + nu t)) dt)"""
    c_s = _check_speed(model, c)
    nu = float(np.sqrt(c_s * c_s - c * c))
    xi = xi_c(model, c)
    r0 = float(reduced_n(model, c, 0.0)[0])

    def integrand(s: float) -> float:
        t = xi - s * s
        slope = float(_reduced_slope_mean(model, c, xi, s)[0])
        if slope <= 0.0:
            raise ProfileError("divergent amplitude integrand; speed too far from c_s", c=c, s=s)
        # (R(t) + nu^2) / t, i.e. the mean of R' over [0, t]
        sonic = float(chord_mean(lambda e: reduced_n(model, c, e)[1], t, t)[0]) if t > 0 else \
            float(reduced_n(model, c, 0.0)[1])
        return 2.0 * sonic / (np.sqrt(slope) * (s * np.sqrt(slope) + nu))

    exponent, _ = integrate.quad(integrand, 0.0, np.sqrt(xi), epsabs=1e-13, epsrel=1e-12, limit=200)
    formula = xi * np.exp(exponent)
    if not np.isfinite(formula) or formula <= 0.0:
        raise ProfileError("amplitude integral diverged", c=c, exponent=exponent, r0=r0)

    tail_fit = None
    if grid is not None:
        tail_fit = build_profile(model, c, grid).amplitude_Mc
    return AmplitudeEstimate(c=float(c), xi=xi, nu=nu, formula=float(formula), tail_fit=tail_fit)


def momentum_of_speed(model: NonlinearityModel, c: float) -> float:
    """p(Q_c) = (1/2) int eta_c v_c, integrated in eta across the turning point"""
    _check_speed(model, c)
    xi = xi_c(model, c)

    def integrand(s: float) -> float:
        eta = xi - s * s
        slope = float(_reduced_slope_mean(model, c, xi, s)[0])
        return eta / ((1.0 - eta) * np.sqrt(slope))

    value, _ = integrate.quad(integrand, 0.0, np.sqrt(xi), epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(c * value)


def momentum_speed_derivative(model: NonlinearityModel, c: float, dc: float) -> float:
    """Centered difference of p(Q_c) along the branch"""
    return (momentum_of_speed(model, c + dc) - momentum_of_speed(model, c - dc)) / (2.0 * dc)


@dataclass(frozen=True)
class AdmissibleWindow:
    """Detected lower end c1 of the validated speed window (c1, c_s)"""

    c1: float
    c_s: float
    failures: List[Dict[str, float]]

    def contains(self, c: float) -> bool:
        return self.c1 < c < self.c_s


def admissible_window(model: NonlinearityModel, speeds: Optional[np.ndarray] = None,
                      eta_samples: int = 400) -> AdmissibleWindow:
    """Largest scanned speed where xi_c < 1, M_c > 0 or q-positivity fails"""
    c_s = sound_speed(model)
    if speeds is None:
        speeds = np.linspace(0.02 * c_s, 0.995 * c_s, 60)
    failures: List[Dict[str, float]] = []
    c1 = 0.0
    for c in sorted(speeds, reverse=True):
        reason = None
        try:
            xi = xi_c(model, c)
            if amplitude_Mc(model, c).formula <= 0.0:
                reason = "amplitude"
            else:
                eta = xi * (1.0 - np.cos(0.5 * np.pi * (np.arange(1, eta_samples + 1) / eta_samples)))
                forms = BranchForms.evaluate(model, c, eta, np.ones_like(eta))
                if np.min(forms.q1_over_eta) <= 0.0 or np.min(forms.q1_tilde_over_eta) <= 0.0:
                    reason = "q-positivity"
        except ProfileError as exc:
            reason = exc.message
        if reason is not None:
            failures.append({"c": float(c), "reason": reason})
            c1 = float(c)
            break
    return AdmissibleWindow(c1=c1, c_s=c_s, failures=failures)


