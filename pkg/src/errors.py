"""
Exception hierarchy for Soliton Lab

Every error carries the name of the module that raised it and a free-form
context dict, which the experiment layer copies into the failure result.
"""

from typing import Any, Dict, Optional


class SolitonLabError(Exception):
    """Base error with module name and context"""

    module = "core"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.message,
            "module": self.module,
            "context": {k: _jsonable(v) for k, v in self.context.items()},
        }


class NonlinearityError(SolitonLabError):
    module = "nonlinearity"


class ProfileError(SolitonLabError):
    module = "profile"


class GridError(SolitonLabError):
    module = "spectral_grid"


class DynamicsAbort(SolitonLabError):
    """Run aborted; `last_good` holds the last valid state"""

    module = "dynamics"

    def __init__(self, message: str, status: str, last_good: Optional[Any] = None, **context: Any):
        super().__init__(message, status=status, **context)
        self.status = status
        self.last_good = last_good


class LiftingError(SolitonLabError):
    """Hydrodynamic variables undefined where psi vanishes"""

    module = "dynamics"


class ModulationError(SolitonLabError):
    """Decomposition failed; `last_iterate` holds (a, c)"""

    module = "modulation"

    def __init__(self, message: str, last_iterate: Optional[Any] = None, **context: Any):
        super().__init__(message, last_iterate=last_iterate, **context)
        self.last_iterate = last_iterate


class OperatorError(SolitonLabError):
    module = "operators"


class WindowViolation(OperatorError):
    """Speed outside the validated transonic window"""


class DiagnosticsError(SolitonLabError):
    module = "diagnostics"


class ConfigError(SolitonLabError):
    module = "cli"


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    try:
        return float(value)
    except (TypeError, ValueError):
        return repr(value)
