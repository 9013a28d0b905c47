"""Stability Diagnostics (localized momentum, virial, weighted decay, smoothing)"""

from .momentum import (
    MonotonicityReport,
    cutoff,
    localized_momentum,
    localized_momentum_rate,
    lower_bound_density,
    modified_potential,
    monotonicity_report,
    soliton_tail_constant,
)
from .virial import GAMMA_SCAN, DualSeries, VirialReport, dual_series, virial_series, scan_gamma
from .decay import (
    WindowReport,
    weighted_decay_report,
    weighted_decay_reports,
    smoothing_report,
    local_residual_norm,
    asymptotic_signature,
)
from .series import DiagnosticsSeries

__all__ = [
    "MonotonicityReport",
    "cutoff",
    "localized_momentum",
    "localized_momentum_rate",
    "lower_bound_density",
    "modified_potential",
    "monotonicity_report",
    "soliton_tail_constant",
    "GAMMA_SCAN",
    "DualSeries",
    "VirialReport",
    "dual_series",
    "virial_series",
    "scan_gamma",
    "WindowReport",
    "weighted_decay_report",
    "weighted_decay_reports",
    "smoothing_report",
    "local_residual_norm",
    "asymptotic_signature",
    "DiagnosticsSeries",
]
