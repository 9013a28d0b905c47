"""Linearized Operators, Coefficient Fields and Transonic Constants"""

from .linearized import (
    OperatorMatrix,
    difference_matrix,
    potential_term,
    assemble_H_c,
    apply_H_c,
    spectrum,
    kernel_alignment,
    kernel_residual,
    energy_gram,
    constraint_vectors,
    coercivity_lc,
    dual_variable,
)
from .coefficients import (
    QCoefficients,
    VirialWeight,
    q_coefficients,
    sum_of_squares,
    virial_flux_form,
    virial_matrix,
)
from .transonic import TransonicConstants, transonic_constants, assemble_T_limit, scan_lambda_minus
from .report import SpectralReport, spectral_report

__all__ = [
    "OperatorMatrix",
    "difference_matrix",
    "potential_term",
    "assemble_H_c",
    "apply_H_c",
    "spectrum",
    "kernel_alignment",
    "kernel_residual",
    "energy_gram",
    "constraint_vectors",
    "coercivity_lc",
    "dual_variable",
    "QCoefficients",
    "VirialWeight",
    "q_coefficients",
    "sum_of_squares",
    "virial_flux_form",
    "virial_matrix",
    "TransonicConstants",
    "transonic_constants",
    "assemble_T_limit",
    "scan_lambda_minus",
    "SpectralReport",
    "spectral_report",
]
