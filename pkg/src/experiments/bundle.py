"""
Artifact bundle: one directory per run

    config.ini / config.json   the validated configuration
    <table>.csv                every table of the preset (float format %.17g)
    summary.json               version, status, summary values, error
    acceptance.json            PASS/FAIL block
    trace.json                 spans and scores of the run
    snapshots_<name>.npz|csv   optional state dumps
"""

import hashlib
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from .. import __version__
from ..dynamics.runner import Trajectory
from ..errors import ConfigError
from ..utils.helpers import read_json, write_json
from .config_loader import RunConfig, load_config
from .results import PresetResult

FLOAT_FORMAT = "%.17g"
REQUIRED_FILES = ("config.ini", "summary.json", "acceptance.json")


def write_snapshots(path: Path, trajectory: Trajectory, fmt: str = "npz") -> Path:
    """Long-form CSV (t, x, eta, v) or an .npz block with header (n, L, t)"""
    grid = trajectory.snapshots[0].grid
    if fmt == "csv":
        path = path.with_suffix(".csv")
        frames = [pd.DataFrame({"t": s.time, "x": grid.x, "eta": s.eta, "v": s.v}) for s in trajectory.snapshots]
        pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path
    path = path.with_suffix(".npz")
    np.savez_compressed(
        path,
        n=np.int64(grid.n),
        L=np.float64(grid.L),
        t=np.asarray(trajectory.times),
        eta=np.stack([s.eta for s in trajectory.snapshots]),
        v=np.stack([s.v for s in trajectory.snapshots]),
    )
    return path


def write_bundle(directory: Union[str, Path], config: RunConfig, result: PresetResult,
                 trace: Optional[Dict[str, Any]] = None) -> Path:
    """Write every artifact of one run; per-run directory, nothing shared"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "config.ini").write_text(config.to_ini(), encoding="utf-8")
    write_json(directory / "config.json", config.model_dump(mode="json"))

    for name, table in sorted(result.tables.items()):
        table.to_csv(directory / f"{name}.csv", index=False, float_format=FLOAT_FORMAT)

    write_json(directory / "summary.json", {"version": __version__, **result.to_dict()})
    write_json(directory / "acceptance.json", result.acceptance)
    if trace is not None:
        write_json(directory / "trace.json", trace)
    if config.diagnostics.dump_snapshots:
        for name, trajectory in sorted(result.trajectories.items()):
            if trajectory.snapshots:
                write_snapshots(directory / f"snapshots_{name}", trajectory, config.output.snapshot_format)
    return directory


def csv_digests(directory: Union[str, Path]) -> Dict[str, str]:
    """sha256 of every CSV in a bundle"""
    directory = Path(directory)
    return {path.name: hashlib.sha256(path.read_bytes()).hexdigest() for path in sorted(directory.glob("*.csv"))}


def verify_bundle(directory: Union[str, Path]) -> Dict[str, Any]:
    """Check a bundle is complete and consistent with its own config"""
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigError("bundle directory not found", path=str(directory))
    missing = [name for name in REQUIRED_FILES if not (directory / name).is_file()]
    report: Dict[str, Any] = {"bundle": str(directory), "missing": missing, "problems": []}
    if missing:
        report["valid"] = False
        return report

    config = load_config(directory / "config.ini")
    summary = read_json(directory / "summary.json")
    acceptance = read_json(directory / "acceptance.json")
    problems = report["problems"]
    if summary.get("version") is None:
        problems.append("summary has no version field")
    if acceptance.get("config_hash") != config.config_hash():
        problems.append("acceptance config_hash does not match config.ini")
    if acceptance.get("status") not in ("PASS", "FAIL"):
        problems.append("acceptance status is neither PASS nor FAIL")
    for table in summary.get("tables", []):
        if not (directory / f"{table}.csv").is_file():
            problems.append(f"table {table}.csv listed in summary but missing")
    criteria = acceptance.get("criteria", {})
    derived = "PASS" if criteria and summary.get("success") and all(c.get("passed") for c in criteria.values()) \
        else "FAIL"
    if acceptance.get("status") != derived:
        problems.append("acceptance status disagrees with its criteria")

    report.update({"valid": not problems, "preset": acceptance.get("preset"), "status": acceptance.get("status"),
                   "version": summary.get("version"), "digests": csv_digests(directory)})
    return report
