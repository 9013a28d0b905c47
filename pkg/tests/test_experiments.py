"""
Experiment layer: config validation and hashing, sweep parsing, acceptance
blocks, perturbation scaling, preset execution, artifact bundles and the CLI.
"""

import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from app import main
from src.config import RunStatus
from src.dynamics import run
from src.errors import ConfigError
from src.experiments import (
    Criterion,
    ExperimentLab,
    PresetResult,
    csv_digests,
    execute_preset,
    gaussian_bump,
    parse_config,
    perturbed_wave,
    random_bumps,
    run_experiment,
    verify_bundle,
    write_bundle,
    write_snapshots,
)
from src.experiments import presets
from src.experiments.config_loader import PerturbationSection
from src.grid import Grid, x_norm
from src.profile import build_profile
from src.utils import parse_sweep

from .conftest import gp_nu

TRANSONIC_INI = """
[model]
id = gp

[wave]
c = 1.38

[diagnostics]
operator_n = 256

[experiment]
preset = transonic-constants
speeds = 1.38, 1.4
"""

MONOTONICITY_INI = """
[model]
id = gp

[wave]
c = 1.38

[grid]
n = 256

[time]
T = 1
t_snap = 0.5

[diagnostics]
sigma = 0.1

[experiment]
preset = monotonicity
"""

SPECTRAL_INI = """
[model]
id = gp

[wave]
c = 1.38

[diagnostics]
operator_n = 256

[experiment]
preset = spectral-sweep
speeds = 1.38
"""


@pytest.fixture(scope="module")
def transonic_config():
    return parse_config(TRANSONIC_INI)


@pytest.fixture(scope="module")
def transonic_result(transonic_config):
    return execute_preset(transonic_config)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "transonic.ini"
    path.write_text(TRANSONIC_INI, encoding="utf-8")
    return path


class TestRunConfig:
    def test_sections_and_case_sensitive_keys(self):
        config = parse_config("""
[model]
id = beta
beta = 0.5

[wave]
c = 0.9

[grid]
n = 512
L = 100

[time]
T = 3.0
frame_speed = auto

[diagnostics]
R = 12.5
rhos = 0, 1.5

[experiment]
preset = orbital
amplitudes = 1e-3, 1e-2
""")
        assert config.model.params == {"beta": 0.5}
        assert config.time.T == 3.0
        assert config.grid.L == 100.0
        assert config.diagnostics.R == 12.5
        assert config.diagnostics.rhos == [0.0, 1.5]
        assert config.experiment.amplitudes == [1e-3, 1e-2]
        assert config.frame_speed == 0.9
        assert config.half_length() == 100.0

    def test_half_length_from_span(self, transonic_config):
        assert transonic_config.half_length() == pytest.approx(40.0 / gp_nu(1.38))
        assert transonic_config.half_length(1.0) == pytest.approx(40.0)

    @pytest.mark.parametrize("text", [
        "[wave]\nc = 1.5\n[experiment]\npreset = orbital\n",
        "[wave]\nc = 1.0\n[experiment]\npreset = dance\n",
        "[wave]\nc = 1.0\n[grid]\nn = 300\n[experiment]\npreset = orbital\n",
        "[wave]\nc = 1.0\n[diagnostics]\nrhos = 5\n[experiment]\npreset = virial\n",
        "[model]\nid = quartic\n[wave]\nc = 1.0\n[experiment]\npreset = orbital\n",
        "[wave]\nc = 1.0\n[experiment]\npreset = transonic-constants\nspeeds = 1.3, 1.42\n",
        "[wave\nc = 1.0\n",
    ])
    def test_rejected_before_compute(self, text):
        with pytest.raises(ConfigError) as excinfo:
            parse_config(text)
        assert excinfo.value.module == "cli"

    def test_hash_survives_ini_round_trip(self, transonic_config):
        again = parse_config(transonic_config.to_ini())
        assert again.config_hash() == transonic_config.config_hash()
        assert again.experiment.speeds == [1.38, 1.4]

    def test_hash_sensitive_to_values(self, transonic_config):
        changed = transonic_config.with_override("diagnostics.operator_n", 512)
        assert changed.config_hash() != transonic_config.config_hash()

    def test_overrides(self, transonic_config):
        faster = transonic_config.with_override("c", 1.39)
        assert faster.wave.c == 1.39
        assert transonic_config.wave.c == 1.38

        beta = parse_config("[model]\nid = beta\nbeta = 0.5\n[wave]\nc = 1.0\n[experiment]\npreset = orbital\n")
        assert beta.with_override("model.beta", 0.25).model.params["beta"] == 0.25

        with pytest.raises(ConfigError):
            transonic_config.with_override("c", 1.5)
        with pytest.raises(ConfigError):
            transonic_config.with_override("nowhere.c", 1.0)


class TestParseSweep:
    def test_range_excludes_stop(self):
        key, values = parse_sweep("c=1.30:1.41:0.01")
        assert key == "c"
        assert len(values) == 11
        assert values[0] == 1.3
        assert values[-1] == pytest.approx(1.4)

    def test_list(self):
        assert parse_sweep("model.beta=0.1, 0.5,1") == ("model.beta", [0.1, 0.5, 1.0])

    @pytest.mark.parametrize("param", ["c", "c=", "=1,2", "c=a,b", "c=1:0:0.1", "c=0:1:0"])
    def test_malformed(self, param):
        with pytest.raises(ConfigError):
            parse_sweep(param)


class TestAcceptance:
    def test_criterion_comparisons(self):
        assert Criterion("a", 1e-9, 1e-8).passed
        assert not Criterion("a", 1e-7, 1e-8).passed
        assert Criterion("b", 0.995, 0.99, ">=").passed
        assert not Criterion("c", float("nan"), 1.0).passed
        assert not Criterion("d", float("inf"), 1.0, ">=").passed
        assert not Criterion("e", None, 1.0).passed
        assert Criterion("f", 1e-3, 0.0, ">").passed
        assert not Criterion("f", 0.0, 0.0, ">").passed
        assert not Criterion("f", -1e-3, 0.0, ">").passed

    def test_result_status(self):
        result = PresetResult(preset="orbital", config_hash="abc")
        assert not result.passed
        result.check("small", 1e-10, 1e-8)
        result.check("flag", True, 1.0, "==")
        assert result.acceptance["status"] == "PASS"
        assert result.acceptance["criteria"]["flag"]["value"] == 1.0

        result.check("large", 1.0, 1e-8, note="too big")
        block = result.acceptance
        assert block["status"] == "FAIL"
        assert block["criteria"]["large"] == {"value": 1.0, "threshold": 1e-8, "comparison": "<=",
                                              "passed": False, "note": "too big"}

    def test_failed_run_never_passes(self):
        result = PresetResult(preset="orbital", config_hash="abc", success=False)
        result.check("small", 0.0, 1.0)
        assert result.to_dict()["status"] == "FAIL"


class TestPerturbations:
    def test_norm_is_relative_to_wave(self, gp_wave):
        section = PerturbationSection(shape="gaussian", amplitude=1e-2, center=-5.0)
        state = perturbed_wave(gp_wave, section)
        delta = state - gp_wave.state
        assert x_norm(delta) == pytest.approx(1e-2 * x_norm(gp_wave.state), rel=1e-12)

    def test_none_returns_wave(self, gp_wave):
        assert perturbed_wave(gp_wave, PerturbationSection()) is gp_wave.state
        section = PerturbationSection(shape="gaussian", amplitude=1e-2)
        assert perturbed_wave(gp_wave, section, amplitude=0.0) is gp_wave.state

    def test_targets(self, grid):
        bump = gaussian_bump(grid, 0.0, 1.0, target="v")
        assert np.all(bump.eta == 0.0)
        assert bump.v.max() == pytest.approx(1.0)

    def test_random_bumps_are_seeded(self, grid):
        first = random_bumps(grid, seed=7, count=3)
        again = random_bumps(grid, seed=7, count=3)
        other = random_bumps(grid, seed=8, count=3)
        np.testing.assert_array_equal(first.eta, again.eta)
        assert not np.allclose(first.eta, other.eta)

    def test_radiation_packet_pairs_velocity(self, gp_wave):
        section = PerturbationSection(shape="radiation", amplitude=1e-3, center=10.0, wavenumber=2.0)
        delta = perturbed_wave(gp_wave, section) - gp_wave.state
        ratio = delta.v[np.abs(delta.eta) > 1e-6] / delta.eta[np.abs(delta.eta) > 1e-6]
        np.testing.assert_allclose(ratio, -0.5 * np.sqrt(2.0), rtol=1e-9)


class TestPresets:
    def test_transonic_constants_pass(self, transonic_result):
        assert transonic_result.success
        assert transonic_result.acceptance["status"] == "PASS"
        table = transonic_result.tables["transonic_constants"]
        assert list(table["c"]) == [1.38, 1.4]
        row = table[table["c"] == 1.4].iloc[0]
        assert row["tau"] == pytest.approx(0.0892, rel=1e-3)
        assert transonic_result.summary["ratio_ladder"]["limit_exact"] == pytest.approx(2.25)

    def test_rejected_drift_becomes_failed_result(self):
        result = execute_preset(parse_config(MONOTONICITY_INI))
        assert not result.success
        assert result.acceptance["status"] == "FAIL"
        assert result.error["module"] == "cli"
        assert result.error["context"]["sigma"] == 0.1
        assert result.error["config_hash"] == result.config_hash
        assert not result.acceptance["criteria"]["preset_completed"]["passed"]

    def test_negative_kappa_hat_fails_monotonicity(self, monkeypatch):
        measured = presets.monotonicity_report

        def negative_kappa(*args, **kwargs):
            return replace(measured(*args, **kwargs), kappa_hat=-1e-3)

        monkeypatch.setattr(presets, "monotonicity_report", negative_kappa)
        result = execute_preset(parse_config(MONOTONICITY_INI.replace("sigma = 0.1", "sigma = 0.0")))
        assert result.success
        criterion = result.acceptance["criteria"]["kappa_hat"]
        assert criterion["value"] == -1e-3
        assert criterion["comparison"] == ">"
        assert not criterion["passed"]
        assert result.acceptance["status"] == "FAIL"

    def test_spectral_sweep_reports_flux_form_gap(self):
        result = execute_preset(parse_config(SPECTRAL_INI))
        assert result.success
        forms = result.summary["quadratic_forms"]
        assert forms["sum_of_squares_min"] >= 0.0
        assert forms["flux_form_min"] < 0.0
        criterion = result.acceptance["criteria"]["flux_form_gap_max"]
        assert criterion["value"] == pytest.approx(forms["flux_form_gap_max"])
        assert criterion["value"] > 1.0
        assert not criterion["passed"]
        assert "sum of squares" in criterion["note"]
        assert result.acceptance["status"] == "FAIL"


class TestBundles:
    def test_write_and_verify(self, tmp_path, transonic_config, transonic_result):
        directory = write_bundle(tmp_path / "bundle", transonic_config, transonic_result, {"spans": []})
        for name in ("config.ini", "config.json", "summary.json", "acceptance.json", "trace.json",
                     "transonic_constants.csv"):
            assert (directory / name).is_file()

        report = verify_bundle(directory)
        assert report["valid"], report["problems"]
        assert report["status"] == "PASS"
        assert report["preset"] == "transonic-constants"
        assert set(report["digests"]) == {"transonic_constants.csv"}

    def test_tampered_acceptance_detected(self, tmp_path, transonic_config, transonic_result):
        directory = write_bundle(tmp_path / "bundle", transonic_config, transonic_result)
        path = directory / "acceptance.json"
        acceptance = json.loads(path.read_text())
        acceptance["config_hash"] = "0" * 64
        acceptance["criteria"]["tau_positive_all"]["passed"] = False
        path.write_text(json.dumps(acceptance))

        report = verify_bundle(directory)
        assert not report["valid"]
        assert "acceptance config_hash does not match config.ini" in report["problems"]
        assert "acceptance status disagrees with its criteria" in report["problems"]

    def test_missing_files_reported(self, tmp_path, transonic_config, transonic_result):
        directory = write_bundle(tmp_path / "bundle", transonic_config, transonic_result)
        (directory / "summary.json").unlink()
        report = verify_bundle(directory)
        assert not report["valid"]
        assert report["missing"] == ["summary.json"]

    def test_missing_directory(self, tmp_path):
        with pytest.raises(ConfigError):
            verify_bundle(tmp_path / "absent")

    def test_snapshot_formats(self, tmp_path, gp):
        wave = build_profile(gp, 1.0, Grid(256, 40.0))
        trajectory = run(wave.state, 0.2, gp, t_snap=0.1)
        assert trajectory.status == RunStatus.OK

        npz = write_snapshots(tmp_path / "snapshots_main", trajectory, "npz")
        with np.load(npz) as data:
            assert int(data["n"]) == 256
            assert data["eta"].shape == (3, 256)
            np.testing.assert_allclose(data["t"], [0.0, 0.1, 0.2])

        csv = write_snapshots(tmp_path / "snapshots_main", trajectory, "csv")
        assert csv.suffix == ".csv"
        lines = csv.read_text().splitlines()
        assert lines[0] == "t,x,eta,v"
        assert len(lines) == 1 + 3 * 256


class TestExperimentLab:
    def test_run_writes_named_bundle(self, tmp_path, transonic_config):
        outcome = ExperimentLab(tmp_path).run(transonic_config)
        assert outcome["success"]
        assert outcome["status"] == "PASS"
        assert outcome["bundle"] == str(tmp_path / f"transonic-constants-{transonic_config.config_hash()[:12]}")
        assert verify_bundle(outcome["bundle"])["valid"]

    def test_identical_configs_write_identical_tables(self, tmp_path, transonic_config):
        lab = ExperimentLab(tmp_path)
        lab.run(transonic_config, tmp_path / "first")
        lab.run(parse_config(TRANSONIC_INI), tmp_path / "second")
        first = csv_digests(tmp_path / "first")
        assert set(first) == {"transonic_constants.csv"}
        assert first == csv_digests(tmp_path / "second")

    def test_run_experiment_entry(self, tmp_path, transonic_config):
        outcome = run_experiment(transonic_config, tmp_path / "entry")
        assert outcome["status"] == "PASS"
        assert (tmp_path / "entry" / "transonic_constants.csv").is_file()

    def test_failed_run_still_writes_a_valid_bundle(self, tmp_path):
        outcome = ExperimentLab(tmp_path).run(parse_config(MONOTONICITY_INI), tmp_path / "failed")
        assert not outcome["success"]
        assert outcome["module"] == "cli"
        report = verify_bundle(tmp_path / "failed")
        assert report["valid"]
        assert report["status"] == "FAIL"

    def test_sweep_rejects_values_individually(self, tmp_path, transonic_config):
        outcomes = ExperimentLab(tmp_path).sweep(transonic_config, "c", [1.39, 1.5], tmp_path / "sweep")
        assert [o["param"] for o in outcomes] == ["c=1.39", "c=1.5"]
        assert outcomes[0]["status"] == "PASS"
        assert (tmp_path / "sweep" / "c=1.39" / "acceptance.json").is_file()
        assert outcomes[1]["status"] == "FAIL"
        assert outcomes[1]["bundle"] is None
        assert outcomes[1]["module"] == "cli"


class TestCommandLine:
    def test_repository_root_on_path(self):
        root = Path(__file__).resolve().parents[1]
        assert str(root) in sys.path
        assert (root / "app.py").is_file()

    def test_run_then_verify(self, tmp_path, config_file):
        out = tmp_path / "bundle"
        assert main(["run", str(config_file), "--out", str(out)]) == 0
        assert main(["verify", str(out)]) == 0

    def test_missing_config_is_a_config_error(self, tmp_path):
        assert main(["run", str(tmp_path / "absent.ini")]) == 2

    def test_sweep_exit_code(self, tmp_path, config_file):
        assert main(["sweep", str(config_file), "--param", "c=1.39,1.5", "--out", str(tmp_path / "s")]) == 1
        assert main(["sweep", str(config_file), "--param", "c=oops"]) == 2

    def test_verify_incomplete_bundle(self, tmp_path):
        (tmp_path / "partial").mkdir()
        assert main(["verify", str(tmp_path / "partial")]) == 1
