"""
Nonlinearity models

A model is a real function f with f(1) = 0 entering the equation
i Psi_t + Psi_xx + Psi f(|Psi|^2) = 0. Models evaluate f and its first three
derivatives, expose the potential F(rho) = int_rho^1 f, and report the
growth hypotheses used by the stability theory.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from ..errors import NonlinearityError

ArrayLike = Union[np.ndarray, float]

# Tensor Gauss-Legendre rule on [0, 1]^2 for the reduced potential
_GL_NODES, _GL_WEIGHTS = leggauss(24)
GL_NODES = 0.5 * (_GL_NODES + 1.0)
GL_WEIGHTS = 0.5 * _GL_WEIGHTS


class NonlinearityModel(ABC):
    """Base class for f; subclasses implement `eval`"""

    name: str = "abstract"

    @property
    def params(self) -> Dict[str, float]:
        return {}

    @abstractmethod
    def eval(self, rho: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Return (f, f', f'', f''') at rho"""

    def closed_form_potential(self, rho: ArrayLike) -> Optional[np.ndarray]:
        """F in closed form, or None when quadrature is needed"""
        return None

    def closed_form_reduced(self, xi: ArrayLike) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """(F(1 - xi) / xi^2, its xi-derivative) in closed form, or None"""
        return None

    def f(self, rho: ArrayLike) -> np.ndarray:
        return self.eval(rho)[0]

    def fp(self, rho: ArrayLike) -> np.ndarray:
        return self.eval(rho)[1]

    def fpp(self, rho: ArrayLike) -> np.ndarray:
        return self.eval(rho)[2]

    @property
    def key(self) -> str:
        """Stable identifier used in cache keys and run metadata"""
        args = ",".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))
        return f"{self.name}({args})"

    def _check_background(self) -> None:
        f1 = float(np.asarray(self.eval(1.0)[0]))
        if abs(f1) > 1e-14:
            raise NonlinearityError("background condition f(1) = 0 violated", model=self.key, f1=f1)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.key}>"


@dataclass(frozen=True, repr=False)
class PolynomialModel(NonlinearityModel):
    """f(s) = sum_j a_j (1 - s)^j; a_0 must vanish"""

    coefficients: Tuple[float, ...]
    name: str = "polynomial"
    labels: Dict[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(a) for a in self.coefficients))
        if not self.coefficients:
            raise NonlinearityError("polynomial model needs at least one coefficient")
        self._check_background()

    @property
    def params(self) -> Dict[str, float]:
        if self.labels:
            return dict(self.labels)
        return {f"a{j}": a for j, a in enumerate(self.coefficients) if a != 0.0}

    def eval(self, rho):
        y = 1.0 - np.asarray(rho, dtype=float)
        a = np.asarray(self.coefficients)
        deg = len(a) - 1
        # derivatives in s are (-1)^m times derivatives in y
        c0 = a
        c1 = np.array([j * a[j] for j in range(1, deg + 1)]) if deg >= 1 else np.zeros(1)
        c2 = np.array([j * (j - 1) * a[j] for j in range(2, deg + 1)]) if deg >= 2 else np.zeros(1)
        c3 = np.array([j * (j - 1) * (j - 2) * a[j] for j in range(3, deg + 1)]) if deg >= 3 else np.zeros(1)
        f = np.polynomial.polynomial.polyval(y, c0)
        fp = -np.polynomial.polynomial.polyval(y, c1)
        fpp = np.polynomial.polynomial.polyval(y, c2)
        fppp = -np.polynomial.polynomial.polyval(y, c3)
        shape = np.shape(y)
        return (np.broadcast_to(f, shape) * 1.0, np.broadcast_to(fp, shape) * 1.0,
                np.broadcast_to(fpp, shape) * 1.0, np.broadcast_to(fppp, shape) * 1.0)

    def closed_form_potential(self, rho):
        y = 1.0 - np.asarray(rho, dtype=float)
        integrated = [0.0] + [a / (j + 1) for j, a in enumerate(self.coefficients)]
        return np.polynomial.polynomial.polyval(y, integrated)

    def closed_form_reduced(self, xi):
        if self.coefficients[0] != 0.0:
            return None
        xi = np.asarray(xi, dtype=float)
        phi = [a / (j + 1) for j, a in enumerate(self.coefficients) if j >= 1]
        dphi = [(j - 1) * a / (j + 1) for j, a in enumerate(self.coefficients) if j >= 2] or [0.0]
        return (np.polynomial.polynomial.polyval(xi, phi) + 0.0 * xi,
                np.polynomial.polynomial.polyval(xi, dphi) + 0.0 * xi)


@dataclass(frozen=True, repr=False)
class ExponentialModel(NonlinearityModel):
    """f(s) = exp(lam (1 - s)) - 1; its potential goes through adaptive quadrature"""

    lam: float = 1.0
    name: str = "exponential"

    def __post_init__(self):
        self._check_background()

    @property
    def params(self) -> Dict[str, float]:
        return {"lam": self.lam}

    def eval(self, rho):
        e = np.exp(self.lam * (1.0 - np.asarray(rho, dtype=float)))
        lam = self.lam
        return e - 1.0, -lam * e, lam ** 2 * e, -lam ** 3 * e


def gross_pitaevskii() -> PolynomialModel:
    """f(s) = 1 - s"""
    return PolynomialModel((0.0, 1.0), name="gp", labels={})


def beta_family(beta: float) -> PolynomialModel:
    """f(s) = (1 - s) + beta (1 - s)^2; k = 4 beta - 6"""
    return PolynomialModel((0.0, 1.0, float(beta)), name="beta", labels={"beta": float(beta)})


def cubic_quintic(alpha3: float, alpha5: float) -> PolynomialModel:
    """f(s) = alpha3 (1 - s) - alpha5 (1 - s^2), i.e. a cubic and a quintic term"""
    coeffs = (0.0, alpha3 - 2.0 * alpha5, alpha5)
    return PolynomialModel(coeffs, name="cubic-quintic",
                           labels={"alpha3": float(alpha3), "alpha5": float(alpha5)})


def _polynomial_from_params(**params: float) -> PolynomialModel:
    coeffs = [0.0]
    j = 1
    while f"a{j}" in params:
        coeffs.append(float(params[f"a{j}"]))
        j += 1
    if "a0" in params:
        coeffs[0] = float(params["a0"])
    return PolynomialModel(tuple(coeffs))


MODEL_REGISTRY: Dict[str, Callable[..., NonlinearityModel]] = {
    "gp": lambda **p: gross_pitaevskii(),
    "beta": lambda beta=0.5, **p: beta_family(beta),
    "cubic-quintic": lambda alpha3=1.0, alpha5=0.1, **p: cubic_quintic(alpha3, alpha5),
    "exponential": lambda lam=1.0, **p: ExponentialModel(lam=float(lam)),
    "polynomial": _polynomial_from_params,
}


def build_model(identifier: str, params: Optional[Dict[str, float]] = None) -> NonlinearityModel:
    """Build a model from its config identifier and parameter map"""
    factory = MODEL_REGISTRY.get(identifier)
    if factory is None:
        raise NonlinearityError(f"unknown nonlinearity model '{identifier}'",
                                known=sorted(MODEL_REGISTRY))
    return factory(**(params or {}))


# ---------------------------------------------------------------------------
# Scalar quantities
# ---------------------------------------------------------------------------

def potential_F(model: NonlinearityModel, rho: ArrayLike) -> np.ndarray:
    """F(rho) = int_rho^1 f(r) dr, closed form when available"""
    closed = model.closed_form_potential(rho)
    if closed is not None:
        return closed

    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    out = np.empty_like(rho_arr)
    for i, r in enumerate(rho_arr.ravel()):
        value, _ = integrate.quad(lambda s: float(model.f(s)), r, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)
        out.flat[i] = value
    return out.reshape(np.shape(rho)) if np.ndim(rho) else out[0]


def sound_speed(model: NonlinearityModel) -> float:
    """c_s = sqrt(-2 f'(1))"""
    fp1 = float(model.fp(1.0))
    if not fp1 < 0.0:
        raise NonlinearityError("nonlinearity is not defocusing: f'(1) must be negative",
                                model=model.key, fp1=fp1)
    return float(np.sqrt(-2.0 * fp1))


def transonic_coefficient(model: NonlinearityModel) -> float:
    """k = 2 f''(1) + 6 f'(1)"""
    _, fp1, fpp1, _ = model.eval(1.0)
    return float(2.0 * fpp1 + 6.0 * fp1)


def reduced_potential(model: NonlinearityModel, xi: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """Phi(xi) = F(1 - xi) / xi^2 and Phi'(xi), finite at xi = 0

    Both are double integrals of f' and f'' along the segment [1 - xi, 1],
    evaluated with a tensor Gauss-Legendre rule, so they stay accurate where
    F(1 - xi) underflows.
    """
    xi_arr = np.asarray(xi, dtype=float)
    closed = model.closed_form_reduced(xi_arr)
    if closed is not None:
        if xi_arr.ndim == 0:
            return float(closed[0]), float(closed[1])
        return closed
    flat = np.atleast_1d(xi_arr).ravel()
    s = GL_NODES[None, :, None]
    u = GL_NODES[None, None, :]
    w = (GL_WEIGHTS[:, None] * GL_WEIGHTS[None, :])[None, :, :]
    arg = 1.0 - flat[:, None, None] * s * u
    _, fp, fpp, _ = model.eval(arg)
    phi = -np.sum(w * s * fp, axis=(1, 2))
    dphi = np.sum(w * s * s * u * fpp, axis=(1, 2))
    if xi_arr.ndim == 0:
        return float(phi[0]), float(dphi[0])
    return phi.reshape(xi_arr.shape), dphi.reshape(xi_arr.shape)


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypothesisReport:
    """Sampled check of the growth and sign hypotheses"""

    h0_sampled_ok: bool
    h1_ok: bool
    h2_ok: bool
    h3_ok: bool
    worst_violation: Tuple[float, float]
    fitted: Dict[str, float] = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return self.h0_sampled_ok and self.h1_ok and self.h2_ok and self.h3_ok


def _power_bound(t: np.ndarray, values: np.ndarray, floor_exponent: float,
                 extrapolated: Callable[[float], float]) -> Tuple[bool, float, float]:
    """Fit values <= M t^q on log samples; check the bound over the next octave

    Returns (holds, M, q). The exponent comes from a least-squares fit over the
    far half of the samples, floored at `floor_exponent`; M is the smallest
    constant covering every sample. The bound holds if it still covers the
    value at twice the largest sample with 1% slack, which fails for
    super-polynomial growth.
    """
    mask = values > 0.0
    if mask.sum() < 4:
        return True, 0.0, floor_exponent
    lt, lv = np.log(t[mask]), np.log(values[mask])
    half = len(lt) // 2
    slope, _ = np.polyfit(lt[half:], lv[half:], 1)
    q = max(float(slope), floor_exponent)
    log_m = float(np.max(lv - q * lt))
    t_next = 2.0 * float(t[mask][-1])
    v_next = extrapolated(t_next)
    holds = v_next <= 0.0 or np.log(v_next) <= log_m + q * np.log(t_next) + np.log(1.01)
    return bool(holds), float(np.exp(log_m)), q


def check_hypotheses(model: NonlinearityModel, rho_samples: Sequence[float]) -> HypothesisReport:
    """Check (H0)-(H3) on the given samples of rho"""
    rho = np.sort(np.asarray(rho_samples, dtype=float))
    if rho.size < 8 or rho[0] > 0.0 or rho[-1] < 4.0:
        raise NonlinearityError("hypothesis samples must cover [0, rho_max] with rho_max >= 4",
                                rho_min=float(rho[0]) if rho.size else None,
                                rho_max=float(rho[-1]) if rho.size else None)

    cs2 = sound_speed(model) ** 2
    k = transonic_coefficient(model)
    F = np.asarray(potential_F(model, rho), dtype=float)

    # (H1) pointwise lower bound
    margin = F - 0.25 * cs2 * (1.0 - rho) ** 2
    tol = 1e-12 * np.maximum(1.0, np.abs(F))
    worst = int(np.argmin(margin))
    h1_ok = bool(np.all(margin >= -tol))

    # (H2) polynomial growth of F
    tail = rho >= 2.0
    y = rho[tail] - 1.0
    h2_ok, m_const, q_star = _power_bound(
        y, F[tail], 2.0, lambda t: float(potential_F(model, 1.0 + t)))

    # (H0) decay of f'' at large rho, |f''| <= C0 rho^(alpha1 - 3)
    big = rho >= 1.0
    fpp = np.abs(np.asarray(model.fpp(rho[big]), dtype=float))
    h0_ok, c0, exponent = _power_bound(
        rho[big], fpp, -2.0, lambda t: float(abs(model.fpp(t))))
    alpha1 = exponent + 3.0

    return HypothesisReport(
        h0_sampled_ok=h0_ok,
        h1_ok=h1_ok,
        h2_ok=h2_ok,
        h3_ok=bool(k < 0.0),
        worst_violation=(float(rho[worst]), float(margin[worst])),
        fitted={"M": m_const, "q_star": q_star, "C0": c0, "alpha1": alpha1, "k": k},
    )
