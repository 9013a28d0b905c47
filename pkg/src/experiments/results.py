"""
Preset results and the PASS/FAIL acceptance block
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..dynamics.runner import Trajectory

_COMPARISONS = {
    "<=": lambda value, threshold: value <= threshold,
    "<": lambda value, threshold: value < threshold,
    ">=": lambda value, threshold: value >= threshold,
    ">": lambda value, threshold: value > threshold,
    "==": lambda value, threshold: value == threshold,
}


@dataclass
class Criterion:
    """One acceptance check: value compared against threshold"""

    name: str
    value: float
    threshold: float
    comparison: str = "<="
    note: Optional[str] = None

    @property
    def passed(self) -> bool:
        if self.value is None:
            return False
        value = float(self.value)
        if not np.isfinite(value):
            return False
        return bool(_COMPARISONS[self.comparison](value, float(self.threshold)))

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "value": None if self.value is None else float(self.value),
            "threshold": float(self.threshold),
            "comparison": self.comparison,
            "passed": self.passed,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class PresetResult:
    """Everything one preset produced"""

    preset: str
    config_hash: str
    success: bool = True
    criteria: List[Criterion] = field(default_factory=list)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None
    trajectories: Dict[str, Trajectory] = field(default_factory=dict)

    def check(self, name: str, value, threshold: float, comparison: str = "<=",
              note: Optional[str] = None) -> Criterion:
        if isinstance(value, (bool, np.bool_)):
            value = float(value)
        criterion = Criterion(name, None if value is None else float(value), threshold, comparison, note)
        self.criteria.append(criterion)
        return criterion

    @property
    def passed(self) -> bool:
        return self.success and bool(self.criteria) and all(c.passed for c in self.criteria)

    @property
    def acceptance(self) -> Dict[str, Any]:
        """Machine-readable acceptance block"""
        return {
            "preset": self.preset,
            "config_hash": self.config_hash,
            "status": "PASS" if self.passed else "FAIL",
            "criteria": {c.name: c.to_dict() for c in self.criteria},
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "preset": self.preset,
            "config_hash": self.config_hash,
            "success": self.success,
            "status": "PASS" if self.passed else "FAIL",
            "summary": self.summary,
            "error": self.error,
            "tables": sorted(self.tables),
        }
