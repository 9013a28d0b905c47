"""
Spectral summary of H_c for one (model, c, grid)
"""

from dataclasses import asdict, dataclass
from typing import Dict, List, Optional

import numpy as np

from ..config import Discretization
from ..errors import WindowViolation
from ..observability.log_setup import get_logger
from ..profile.traveling_wave import TravelingWave
from .linearized import (
    NEGATIVE_THRESHOLD,
    assemble_H_c,
    coercivity_lc,
    constraint_vectors,
    kernel_alignment,
    kernel_residual,
    spectrum,
)
from .transonic import transonic_constants

logger = get_logger("operators")


@dataclass
class SpectralReport:
    c: float
    nu2: float
    discretization: str
    n: int
    L: float
    eigs: List[float]
    negative_count: int
    kernel_alignment: float
    kernel_eigenvalue: float
    kernel_residual: float
    lc: float
    unconstrained_min: float
    symmetry_error: float = 0.0
    k0: Optional[float] = None
    k1: Optional[float] = None
    k2: Optional[float] = None
    k3: Optional[float] = None
    tau_c: Optional[float] = None

    @property
    def structure_ok(self) -> bool:
        return self.negative_count == 1 and self.kernel_alignment >= 0.999 and self.lc > 0.0

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        out["structure_ok"] = self.structure_ok
        return out


def spectral_report(wave: TravelingWave, count: int = 6,
                    discretization: str = Discretization.FD4) -> SpectralReport:
    """Assemble H_c and collect its spectral structure and transonic constants"""
    operator = assemble_H_c(wave, discretization)
    values, _ = spectrum(operator, count)
    alignment, kernel_value = kernel_alignment(operator, wave, count)
    report = SpectralReport(
        c=wave.c, nu2=wave.nu ** 2, discretization=discretization, n=wave.grid.n, L=wave.grid.L,
        eigs=[float(v) for v in values],
        negative_count=int(np.sum(values < -NEGATIVE_THRESHOLD)),
        kernel_alignment=alignment,
        kernel_eigenvalue=kernel_value,
        kernel_residual=kernel_residual(operator, wave),
        lc=coercivity_lc(operator, constraint_vectors(wave)),
        unconstrained_min=coercivity_lc(operator, []),
        symmetry_error=operator.symmetry_error,
    )
    try:
        constants = transonic_constants(wave.model, wave.c)
        report.k0, report.k1, report.k2, report.k3 = constants.k0, constants.k1, constants.k2, constants.k3
        report.tau_c = constants.tau
    except WindowViolation as exc:
        logger.info("transonic constants unavailable", extra={"c": wave.c, "reason": exc.message})
    logger.info("spectral report", extra={"c": wave.c, "negative_count": report.negative_count,
                                          "kernel_alignment": alignment, "lc": report.lc})
    return report
