"""
Utility Helper Functions
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np
from rich.table import Table

from ..errors import ConfigError


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and paths into plain JSON values"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(path: Union[str, Path], payload: Any) -> Path:
    """Write JSON with sorted keys"""
    path = Path(path)
    path.write_text(json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_json(path: Union[str, Path]) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def format_number(value: Any, digits: int = 6) -> str:
    """Compact scientific formatting for tables"""
    if value is None:
        return "-"
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    try:
        return f"{float(value):.{digits}g}"
    except (TypeError, ValueError):
        return str(value)


def format_results(result: Dict[str, Any]) -> str:
    """One-line outcome of a run"""
    if not result.get("success"):
        return f"Error [{result.get('module', 'unknown')}]: {result.get('error', 'Unknown error')}"
    return f"{result.get('preset')}: {result.get('status')} -> {result.get('bundle')}"


def acceptance_table(acceptance: Dict[str, Any]) -> Table:
    """Rich table of one acceptance block"""
    table = Table(title=f"{acceptance.get('preset')} [{acceptance.get('status')}]")
    table.add_column("criterion")
    table.add_column("value", justify="right")
    table.add_column("threshold", justify="right")
    table.add_column("result")
    for name, criterion in acceptance.get("criteria", {}).items():
        passed = criterion.get("passed")
        table.add_row(
            name,
            format_number(criterion.get("value")),
            f"{criterion.get('comparison')} {format_number(criterion.get('threshold'))}",
            "[green]PASS[/green]" if passed else "[red]FAIL[/red]",
        )
    return table


def parse_sweep(sweep: str) -> Tuple[str, List[float]]:
    """`key=start:stop:step` (stop excluded) or `key=v1,v2,...`"""
    key, sep, values = sweep.partition("=")
    key = key.strip()
    if not sep or not key or not values.strip():
        raise ConfigError("sweep parameter must look like key=start:stop:step", param=sweep)
    try:
        if ":" in values:
            start, stop, step = (float(part) for part in values.split(":"))
            if step <= 0.0 or stop <= start:
                raise ConfigError("sweep range must have step > 0 and stop > start", param=sweep)
            count = int(math.floor((stop - start) / step - 1e-9)) + 1
            points = [round(start + j * step, 12) for j in range(count)]
        else:
            points = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError("sweep values are not numbers", param=sweep) from exc
    return key, points
