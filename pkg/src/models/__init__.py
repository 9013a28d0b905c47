"""Nonlinearity Models"""

from .nonlinearity import (
    NonlinearityModel,
    PolynomialModel,
    ExponentialModel,
    HypothesisReport,
    MODEL_REGISTRY,
    build_model,
    gross_pitaevskii,
    beta_family,
    cubic_quintic,
    potential_F,
    sound_speed,
    transonic_coefficient,
    reduced_potential,
    check_hypotheses,
)

__all__ = [
    "NonlinearityModel",
    "PolynomialModel",
    "ExponentialModel",
    "HypothesisReport",
    "MODEL_REGISTRY",
    "build_model",
    "gross_pitaevskii",
    "beta_family",
    "cubic_quintic",
    "potential_F",
    "sound_speed",
    "transonic_coefficient",
    "reduced_potential",
    "check_hypotheses",
]
