"""Experiment Layer (run configs, presets, artifact bundles)"""

from .config_loader import RunConfig, load_config, parse_config
from .perturbations import gaussian_bump, radiation_packet, random_bumps, perturbed_wave
from .results import Criterion, PresetResult
from .presets import PRESETS
from .bundle import write_bundle, verify_bundle, write_snapshots, csv_digests
from .lab import ExperimentLab, execute_preset, run_experiment

__all__ = [
    "RunConfig",
    "load_config",
    "parse_config",
    "gaussian_bump",
    "radiation_packet",
    "random_bumps",
    "perturbed_wave",
    "Criterion",
    "PresetResult",
    "PRESETS",
    "write_bundle",
    "verify_bundle",
    "write_snapshots",
    "csv_digests",
    "ExperimentLab",
    "execute_preset",
    "run_experiment",
]
