"""
Experiment Lab - runs presets and writes their artifact bundles
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..config import settings
from ..errors import ConfigError, SolitonLabError
from ..grid.states import HydroState
from ..observability.log_setup import get_logger
from ..observability.tracing import RunTracer
from .bundle import write_bundle
from .config_loader import RunConfig
from .presets import PRESETS
from .results import PresetResult

logger = get_logger("experiments")


def execute_preset(config: RunConfig, tracer: Optional[RunTracer] = None) -> PresetResult:
    """Run the configured preset; module errors become a failed result"""
    preset = config.experiment.preset
    result = PresetResult(preset=preset, config_hash=config.config_hash())
    tracer = tracer or RunTracer(run_id=result.config_hash[:12])
    tracer.start_span(preset, input_data={"model": config.model.id, "c": config.wave.c})
    logger.info("preset started", extra={"preset": preset, "config_hash": result.config_hash})

    try:
        PRESETS[preset](config, result)
    except SolitonLabError as exc:
        result.success = False
        last_good = getattr(exc, "last_good", None)
        if last_good is None:
            last_good = getattr(exc, "last_iterate", None)
        if isinstance(last_good, HydroState):
            last_good = {"t": last_good.time, "max_eta": last_good.max_eta}
        result.error = {**exc.to_dict(), "config_hash": result.config_hash, "last_good": last_good}
        result.check("preset_completed", 0.0, 1.0, "==", note=exc.message)
        logger.error("preset failed", extra={"preset": preset, "module": exc.module, "error": exc.message})

    for criterion in result.criteria:
        tracer.log_score(criterion.name, criterion.value, "PASS" if criterion.passed else "FAIL")
    tracer.end_span(output={"status": result.acceptance["status"]})
    logger.info("preset finished", extra={"preset": preset, "status": result.acceptance["status"]})
    return result


class ExperimentLab:
    """Runs configs and writes one bundle per run under the output root"""

    def __init__(self, output_root: Optional[Union[str, Path]] = None):
        self.output_root = Path(output_root or settings.output_root)

    def bundle_path(self, config: RunConfig, directory: Optional[Union[str, Path]] = None) -> Path:
        if directory is not None:
            return Path(directory)
        if config.output.directory:
            return Path(config.output.directory)
        return self.output_root / f"{config.experiment.preset}-{config.config_hash()[:12]}"

    def run(self, config: RunConfig, directory: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
        """Execute one config and write its bundle"""
        tracer = RunTracer(run_id=config.config_hash()[:12])
        tracer.start_trace(config.experiment.preset,
                           metadata={"model": config.model.id, "params": config.model.params, "c": config.wave.c})

        result = execute_preset(config, tracer)
        path = self.bundle_path(config, directory)
        trace = tracer.end(output={"status": result.acceptance["status"]})
        write_bundle(path, config, result, trace)

        outcome = {
            "success": result.success,
            "preset": result.preset,
            "status": result.acceptance["status"],
            "bundle": str(path),
            "config_hash": result.config_hash,
            "acceptance": result.acceptance,
            "error": None,
        }
        if result.error:
            outcome.update(error=result.error["error"], module=result.error["module"])
        return outcome

    def sweep(self, config: RunConfig, key: str, values: Sequence[float],
              directory: Optional[Union[str, Path]] = None) -> List[Dict[str, Any]]:
        """One run per value of `key`; invalid values are rejected before compute"""
        base = self.bundle_path(config, directory)
        outcomes = []
        for value in values:
            label = f"{key}={value:g}"
            try:
                variant = config.with_override(key, value)
            except ConfigError as exc:
                logger.warning("sweep value rejected", extra={"param": label, "error": exc.message})
                outcomes.append({"success": False, "preset": config.experiment.preset, "status": "FAIL",
                                 "bundle": None, "param": label, "error": exc.message, "module": exc.module,
                                 "context": exc.to_dict()["context"]})
                continue
            outcome = self.run(variant, base / label)
            outcome["param"] = label
            outcomes.append(outcome)
        return outcomes


def run_experiment(config: RunConfig, directory: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """Execute one preset and write its bundle"""
    return ExperimentLab().run(config, directory)
