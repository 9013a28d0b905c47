"""
Run configuration: sectioned key-value files validated into a RunConfig

    [model]         id = gp, plus model parameters (beta = 2.0, ...)
    [wave]          c = 1.38
    [grid]          n = 2048, L = 200 (or span = 40 for L = span / nu_c)
    [time]          T, t_snap, dt, formulation, splitting, frame_speed (number or "auto")
    [perturbation]  shape, amplitude, seed, width, center, target, wavenumber
    [experiment]    preset, speeds, amplitudes
    [diagnostics]   R, sigma, tau, rhos, gammas, bump_width, transient, ...
    [output]        directory
"""

import configparser
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..config import Discretization, Formulation, PresetId, settings
from ..dynamics.classical import STRANG, TRIPLE_JUMP
from ..errors import ConfigError, NonlinearityError
from ..models.nonlinearity import MODEL_REGISTRY, NonlinearityModel, build_model, sound_speed

PERTURBATION_SHAPES = ("none", "gaussian", "radiation", "random")
PERTURBATION_TARGETS = ("eta", "v", "both")
SNAPSHOT_FORMATS = ("npz", "csv")


def _float_list(value: Any) -> List[float]:
    if value is None or value == "":
        return []
    if isinstance(value, str):
        return [float(item) for item in value.replace(";", ",").split(",") if item.strip()]
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(item) for item in value]


class ModelSection(BaseModel):
    id: str = "gp"
    params: Dict[str, float] = Field(default_factory=dict)

    @field_validator("id")
    @classmethod
    def _known(cls, value: str) -> str:
        if value not in MODEL_REGISTRY:
            raise ValueError(f"unknown model '{value}'; known: {sorted(MODEL_REGISTRY)}")
        return value


class WaveSection(BaseModel):
    c: float = Field(gt=0.0)


class GridSection(BaseModel):
    n: int = 2048
    L: Optional[float] = Field(default=None, gt=0.0)
    span: float = Field(default=40.0, gt=0.0)

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 256 or value & (value - 1):
            raise ValueError("n must be a power of two >= 256")
        return value


class TimeSection(BaseModel):
    T: float = Field(default=50.0, gt=0.0)
    t_snap: float = Field(default=0.5, gt=0.0)
    dt: Optional[float] = Field(default=None, gt=0.0)
    stability_constant: float = Field(default_factory=lambda: settings.stability_constant, gt=0.0)
    formulation: str = Formulation.HYDRO
    splitting: str = STRANG
    frame_speed: Union[float, str] = 0.0

    @field_validator("formulation")
    @classmethod
    def _formulation(cls, value: str) -> str:
        if value not in (Formulation.HYDRO, Formulation.CLASSICAL):
            raise ValueError(f"unknown formulation '{value}'")
        return value

    @field_validator("splitting")
    @classmethod
    def _splitting(cls, value: str) -> str:
        if value not in (STRANG, TRIPLE_JUMP):
            raise ValueError(f"unknown splitting '{value}'")
        return value

    @field_validator("frame_speed")
    @classmethod
    def _frame(cls, value):
        if isinstance(value, str):
            if value.strip().lower() == "auto":
                return "auto"
            return float(value)
        return value


class PerturbationSection(BaseModel):
    shape: str = "none"
    amplitude: float = Field(default=0.0, ge=0.0, description="Relative to ||Q_c||_X")
    seed: int = 0
    width: float = Field(default=2.0, gt=0.0)
    center: float = 0.0
    target: str = "both"
    wavenumber: float = Field(default=1.0, gt=0.0)
    bumps: int = Field(default=4, ge=1)

    @field_validator("shape")
    @classmethod
    def _shape(cls, value: str) -> str:
        if value not in PERTURBATION_SHAPES:
            raise ValueError(f"unknown perturbation shape '{value}'")
        return value

    @field_validator("target")
    @classmethod
    def _target(cls, value: str) -> str:
        if value not in PERTURBATION_TARGETS:
            raise ValueError(f"unknown perturbation target '{value}'")
        return value


class ExperimentSection(BaseModel):
    preset: str
    speeds: List[float] = Field(default_factory=list)
    amplitudes: List[float] = Field(default_factory=list)

    @field_validator("preset")
    @classmethod
    def _preset(cls, value: str) -> str:
        if value not in PresetId.ALL:
            raise ValueError(f"unknown preset '{value}'; known: {list(PresetId.ALL)}")
        return value

    @field_validator("speeds", "amplitudes", mode="before")
    @classmethod
    def _lists(cls, value):
        return _float_list(value)

    @field_validator("amplitudes")
    @classmethod
    def _positive(cls, value: List[float]) -> List[float]:
        if any(a <= 0.0 for a in value):
            raise ValueError("amplitudes must be positive")
        return value


class DiagnosticsSection(BaseModel):
    R: float = 20.0
    sigma: float = 0.0
    tau: Optional[float] = None
    tail_constant: Optional[float] = None
    rhos: List[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0])
    gammas: List[float] = Field(default_factory=lambda: [1.0, 3.0, 10.0, 30.0, 100.0])
    gamma: Optional[float] = None
    bump_width: float = Field(default_factory=lambda: settings.bump_width, gt=0.0)
    transient: float = Field(default=1.0, ge=0.0)
    smoothing_orders: List[float] = Field(default_factory=lambda: [1.0, 2.0])
    smoothing_r: float = 2.0
    local_radius: float = Field(default=20.0, gt=0.0)
    discretization: str = Discretization.FD4
    operator_n: int = 512
    operator_span: float = 40.0
    refine: bool = False
    dt_refinement: bool = True
    dump_snapshots: bool = False

    @field_validator("rhos", "gammas", "smoothing_orders", mode="before")
    @classmethod
    def _lists(cls, value):
        return _float_list(value)

    @field_validator("rhos")
    @classmethod
    def _rho_range(cls, value: List[float]) -> List[float]:
        if any(r < 0.0 or r > settings.r_max for r in value):
            raise ValueError(f"weight exponents must lie in [0, {settings.r_max}]")
        return value

    @field_validator("smoothing_orders")
    @classmethod
    def _orders(cls, value: List[float]) -> List[float]:
        if any(int(l) != l or not 1 <= l <= 4 for l in value):
            raise ValueError("smoothing orders must be integers in 1..4")
        return value

    @field_validator("discretization")
    @classmethod
    def _discretization(cls, value: str) -> str:
        if value not in Discretization.ALL:
            raise ValueError(f"unknown discretization '{value}'")
        return value

    @field_validator("operator_n")
    @classmethod
    def _operator_n(cls, value: int) -> int:
        if value < 256 or value & (value - 1):
            raise ValueError("operator_n must be a power of two >= 256")
        return value


class OutputSection(BaseModel):
    directory: Optional[str] = None
    snapshot_format: str = "npz"

    @field_validator("snapshot_format")
    @classmethod
    def _format(cls, value: str) -> str:
        if value not in SNAPSHOT_FORMATS:
            raise ValueError(f"unknown snapshot format '{value}'")
        return value


class RunConfig(BaseModel):
    """One experiment run"""

    model: ModelSection = Field(default_factory=ModelSection)
    wave: WaveSection
    grid: GridSection = Field(default_factory=GridSection)
    time: TimeSection = Field(default_factory=TimeSection)
    perturbation: PerturbationSection = Field(default_factory=PerturbationSection)
    experiment: ExperimentSection
    diagnostics: DiagnosticsSection = Field(default_factory=DiagnosticsSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def _speeds_admissible(self) -> "RunConfig":
        try:
            c_s = sound_speed(self.build_model())
        except NonlinearityError as exc:
            raise ValueError(f"model rejected: {exc.message}") from exc
        for c in [self.wave.c] + list(self.experiment.speeds):
            if not 0.0 < c < c_s:
                raise ValueError(f"speed {c} outside (0, c_s = {c_s:.12g})")
        return self

    def build_model(self) -> NonlinearityModel:
        return build_model(self.model.id, self.model.params)

    @property
    def frame_speed(self) -> float:
        return self.wave.c if self.time.frame_speed == "auto" else float(self.time.frame_speed)

    def nu(self, c: Optional[float] = None) -> float:
        c = self.wave.c if c is None else c
        return float(np.sqrt(sound_speed(self.build_model()) ** 2 - c * c))

    def half_length(self, c: Optional[float] = None) -> float:
        """Configured L, or span / nu_c"""
        return self.grid.L if self.grid.L is not None else self.grid.span / self.nu(c)

    def config_hash(self) -> str:
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def with_override(self, key: str, value: Any) -> "RunConfig":
        """Copy with one field replaced; `c` is short for `wave.c`"""
        section, _, name = key.partition(".") if "." in key else ("wave", "", key)
        data = self.model_dump()
        if section not in data:
            raise ConfigError("unknown config section in override", key=key)
        if section == "model" and name not in ("id",):
            data["model"]["params"][name] = value
        else:
            data[section][name] = value
        return _validate(data)

    def to_ini(self) -> str:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        data = self.model_dump(mode="json")
        model = data.pop("model")
        parser["model"] = {"id": model["id"], **{k: repr(v) for k, v in model["params"].items()}}
        for section, values in data.items():
            parser[section] = {k: _ini_value(v) for k, v in values.items() if v is not None}
        lines = []
        for section in parser.sections():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {value}" for key, value in parser[section].items())
            lines.append("")
        return "\n".join(lines)


def _ini_value(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value).lower() if isinstance(value, bool) else str(value)


def _validate(data: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError("invalid run configuration", errors=[e["msg"] for e in exc.errors()]) from exc


def parse_config(text: str) -> RunConfig:
    """Validate INI text into a RunConfig"""
    parser = configparser.ConfigParser()
    # keys are case-sensitive (T, L, R)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("malformed config file", detail=str(exc)) from exc
    data: Dict[str, Any] = {section: dict(parser[section]) for section in parser.sections()}
    model = data.get("model", {})
    identifier = model.pop("id", "gp")
    data["model"] = {"id": identifier, "params": {k: float(v) for k, v in model.items()}}
    return _validate(data)


def load_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config file not found", path=str(path))
    return parse_config(path.read_text(encoding="utf-8"))
