"""
Diagnostics series of one run, flattened to long-form tables
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from .decay import WindowReport
from .momentum import MonotonicityReport
from .virial import VirialReport


@dataclass
class DiagnosticsSeries:
    """All time series computed for one run"""

    run_id: str
    monotonicity: Optional[MonotonicityReport] = None
    virial: Optional[VirialReport] = None
    weighted: List[WindowReport] = field(default_factory=list)
    smoothing: List[WindowReport] = field(default_factory=list)

    def _columns(self) -> Dict[str, tuple]:
        columns: Dict[str, tuple] = {}
        if self.monotonicity is not None:
            m = self.monotonicity
            columns["p_R"] = (m.times, m.p_series)
            columns["p_R_rate_analytic"] = (m.times, m.rate_analytic)
            columns["p_R_rate_fd"] = (m.times, m.rate_fd)
            columns["lower_bound"] = (m.times, m.lower_bound)
        if self.virial is not None:
            v = self.virial
            columns["n"] = (v.times, v.n_series)
            columns["n_rate"] = (v.times, v.n_rate)
            columns["e_tilde_xnorm2"] = (v.times, v.e_tilde_xnorm2)
        for report in self.weighted + self.smoothing:
            columns[report.name] = (report.window_starts, report.window_values)
        return columns

    def to_dataframe(self) -> pd.DataFrame:
        """Long form: run_id, diagnostic, t, value"""
        frames = []
        for name, (times, values) in self._columns().items():
            frames.append(pd.DataFrame({"run_id": self.run_id, "diagnostic": name,
                                        "t": np.asarray(times, dtype=float),
                                        "value": np.asarray(values, dtype=float)}))
        if not frames:
            return pd.DataFrame(columns=["run_id", "diagnostic", "t", "value"])
        return pd.concat(frames, ignore_index=True)

    def summary(self) -> dict:
        out: dict = {"run_id": self.run_id}
        if self.monotonicity is not None:
            out["monotonicity"] = self.monotonicity.summary()
        if self.virial is not None:
            out["virial"] = self.virial.summary()
        for report in self.weighted + self.smoothing:
            out[report.name] = {"sup": report.sup, "spread": report.spread, "late_trend": report.late_trend()}
        return out
