"""
Diagnostics: localized momentum and its rate, virial series, weighted decay
and smoothing windows, and the long-form series table.
"""

import numpy as np
import pytest

from src.dynamics import hydro_momentum, run
from src.errors import DiagnosticsError
from src.grid import Grid, HydroState
from src.diagnostics import (
    DiagnosticsSeries,
    asymptotic_signature,
    cutoff,
    dual_series,
    local_residual_norm,
    localized_momentum,
    localized_momentum_rate,
    lower_bound_density,
    modified_potential,
    monotonicity_report,
    scan_gamma,
    smoothing_report,
    virial_series,
    weighted_decay_report,
)
from src.modulation import track
from src.profile import classical_wave


@pytest.fixture(scope="module")
def perturbed_run(gp, gp_branch):
    """Q_1 plus a small bump, evolved for two time units and tracked"""
    wave = gp_branch.wave(1.0)
    grid = wave.grid
    bump = 1e-3 * np.exp(-0.5 * (grid.x + 3.0) ** 2)
    trajectory = run(wave.state + HydroState(bump, bump, grid), 2.0, gp, t_snap=0.1)
    return trajectory, track(trajectory, gp_branch, (0.0, 1.0))


@pytest.fixture(scope="module")
def cutoff_bump_run(gp, gp_branch):
    """Q_1 plus a right-moving packet sitting on the cutoff at a + 15"""
    wave = gp_branch.wave(1.0)
    grid = wave.grid
    bump = 1e-2 * np.exp(-0.5 * ((grid.x - 15.0) / 2.0) ** 2)
    trajectory = run(wave.state + HydroState(bump, np.sqrt(0.5) * bump, grid), 2.0, gp, t_snap=0.1)
    return trajectory, track(trajectory, gp_branch, (0.0, 1.0))


@pytest.fixture(scope="module")
def soliton_run(gp, gp_branch):
    wave = gp_branch.wave(1.0)
    trajectory = run(wave.state, 1.0, gp, t_snap=0.1)
    return trajectory, track(trajectory, gp_branch, (0.0, 1.0))


class TestCutoff:
    def test_values_and_limits(self):
        y = np.array([-50.0, 0.0, 50.0])
        chi, chi1, chi3 = cutoff(y, 0.5)
        np.testing.assert_allclose(chi, [0.0, 0.5, 1.0], atol=1e-10)
        assert chi1[1] == pytest.approx(0.125)
        assert chi3[1] == pytest.approx(-0.125 * 0.5 ** 3)

    def test_derivatives_match_differences(self):
        y = np.linspace(-6.0, 6.0, 121)
        h = 1e-4
        tau = 0.7
        _, chi1, chi3 = cutoff(y, tau)
        plus, minus = cutoff(y + h, tau)[0], cutoff(y - h, tau)[0]
        np.testing.assert_allclose(chi1, (plus - minus) / (2.0 * h), atol=1e-8)
        up, down = cutoff(y + h, tau)[1], cutoff(y - h, tau)[1]
        third = (up - 2.0 * chi1 + down) / h ** 2
        assert np.max(np.abs(third - chi3)) <= 1e-5


class TestLocalizedMomentum:
    def test_limits(self, gp_wave):
        total = hydro_momentum(gp_wave.state)
        assert localized_momentum(gp_wave.state, 0.0, -1e6, 0.5) == pytest.approx(total, rel=1e-12)
        assert abs(localized_momentum(gp_wave.state, 0.0, 1e6, 0.5)) <= 1e-12

    def test_centred_cutoff_takes_half(self, gp_wave):
        total = hydro_momentum(gp_wave.state)
        assert localized_momentum(gp_wave.state, 0.0, 0.0, 0.5) == pytest.approx(0.5 * total, rel=1e-10)

    def test_modified_potential_cubic(self, gp):
        eta = np.linspace(0.0, 0.9, 10)
        # rho f(1 - rho) - F(1 - rho) = rho^2 - rho^2 / 2
        np.testing.assert_allclose(modified_potential(gp, eta), 0.5 * eta ** 2, atol=1e-15)

    def test_rate_matches_time_difference(self, gp, gp_branch):
        wave = gp_branch.wave(1.0)
        grid = wave.grid
        bump = 1e-2 * np.exp(-0.5 * (grid.x - 4.0) ** 2)
        initial = wave.state + HydroState(bump, np.zeros(grid.n), grid)
        h = 1e-3
        trajectory = run(initial, 2.0 * h, gp, t_snap=h, dt=h / 4.0)
        R, tau = 2.0, 0.5
        values = [localized_momentum(s, 0.0, R, tau) for s in trajectory.snapshots]
        centred = (values[2] - values[0]) / (2.0 * h)
        rate = localized_momentum_rate(trajectory.snapshots[1], gp, 0.0, R, tau, 0.0)
        assert rate == pytest.approx(centred, rel=1e-5)

    def test_lower_bound_density_positive(self, gp_wave):
        assert lower_bound_density(gp_wave.state, 0.0, 3.0, 0.5) > 0.0


class TestMonotonicity:
    def test_report(self, perturbed_run, gp_branch):
        trajectory, tracked = perturbed_run
        report = monotonicity_report(trajectory, tracked, gp_branch, R=5.0)
        assert report.tau == pytest.approx(0.5)
        assert report.kappa == pytest.approx(0.5 * report.kappa_hat)
        assert report.rate_mismatch <= 5e-2
        assert 0.0 <= report.verdict <= 1.0
        frame = report.to_dataframe()
        assert list(frame.columns) == ["t", "p_R", "rate_analytic", "rate_fd", "lower_bound", "allowance"]
        assert report.summary()["calibration"].startswith("kappa = kappa_hat / 2")

    def test_soliton_violation_is_tail_only(self, soliton_run, gp_branch):
        trajectory, tracked = soliton_run
        R = 20.0
        report = monotonicity_report(trajectory, tracked, gp_branch, R=R)
        assert report.tail_constant <= 1.0
        assert np.all(report.rate_analytic >= -np.exp(-report.tau * R))
        assert np.all(report.bound_density > 0.0)

    def test_perturbed_run_keeps_the_bound(self, cutoff_bump_run, gp_branch):
        trajectory, tracked = cutoff_bump_run
        report = monotonicity_report(trajectory, tracked, gp_branch, R=15.0)
        assert report.kappa_hat > 0.0
        assert report.verdict >= 0.99
        # radiation on the cutoff only feeds p_R
        assert np.all(report.rate_analytic > 0.0)

    @pytest.mark.parametrize("sigma", [0.1, 0.2])
    def test_sigma_sign_flip_on_mirrored_data(self, gp, perturbed_run, sigma):
        trajectory, tracked = perturbed_run
        tau, R = 0.5, 5.0
        a_dot = np.gradient(np.asarray(tracked.a), np.asarray(tracked.times))
        for j, state in enumerate(trajectory.snapshots):
            a = tracked.a_frame[j]
            offset = R + sigma * state.time
            rate = localized_momentum_rate(state, gp, a, offset, tau, a_dot[j] + sigma)
            image = localized_momentum_rate(state.mirrored(), gp, -a, -offset, tau, -(a_dot[j] + sigma))
            assert image == pytest.approx(rate, rel=1e-9, abs=1e-14)

    def test_sigma_sign_flip_on_symmetric_state(self, gp, gp_wave):
        bump = 1e-2 * np.exp(-0.5 * (gp_wave.grid.x - 4.0) ** 2)
        state = gp_wave.state + HydroState(bump, 0.5 * bump, gp_wave.grid)
        mirrored = state.mirrored()
        symmetric = HydroState(0.5 * (state.eta + mirrored.eta), 0.5 * (state.v + mirrored.v), gp_wave.grid)
        np.testing.assert_allclose(symmetric.mirrored().eta, symmetric.eta, atol=1e-15)
        for sigma in (0.1, -0.1):
            forward = localized_momentum_rate(symmetric, gp, 0.0, 3.0, 0.5, sigma)
            flipped = localized_momentum_rate(symmetric, gp, 0.0, -3.0, 0.5, -sigma)
            assert flipped == pytest.approx(forward, rel=1e-9, abs=1e-14)


class TestVirial:
    def test_dual_series_kernel_pairing(self, perturbed_run, gp_branch):
        _, tracked = perturbed_run
        duals = dual_series(tracked, gp_branch)
        assert len(duals.duals) == len(tracked)
        assert np.max(np.abs(duals.kernel_pairing)) <= 1e-8
        assert np.all(duals.norms2 > 0.0)

    def test_series_and_bound(self, perturbed_run, gp_branch):
        _, tracked = perturbed_run
        report = virial_series(tracked, gp_branch, gamma=10.0, transient=0.5)
        assert report.bound_holds
        assert report.integrated_dual_norm > 0.0
        assert list(report.to_dataframe().columns) == ["t", "n", "n_rate", "e_tilde_xnorm2", "ratio"]
        assert set(report.summary()) >= {"gamma", "min_ratio_after_transient", "sup_n", "bound_holds"}

    def test_gamma_scan_reports_every_gamma(self, perturbed_run, gp_branch):
        _, tracked = perturbed_run
        chosen, reports = scan_gamma(tracked, gp_branch, gammas=(1.0, 10.0))
        assert set(reports) == {1.0, 10.0}
        assert chosen is None or chosen in reports


class TestWindows:
    def test_weighted_decay(self, perturbed_run):
        trajectory, tracked = perturbed_run
        report = weighted_decay_report(trajectory, tracked, rho=1.0)
        assert report.name == "weighted_decay_rho=1"
        # windows of unit length from snapshots spaced 0.1 over [0, 2]
        assert report.window_starts[0] == 0.0
        assert report.window_starts[-1] == pytest.approx(1.0)
        assert np.isfinite(report.sup)

    def test_weight_exponent_range(self, perturbed_run):
        trajectory, tracked = perturbed_run
        with pytest.raises(DiagnosticsError) as info:
            weighted_decay_report(trajectory, tracked, rho=5.0)
        assert info.value.module == "diagnostics"

    def test_smoothing_of_stationary_field(self, gp_branch):
        wave = gp_branch.wave(1.0)
        exact = classical_wave(wave)
        snapshots = [exact.with_time(0.25 * j) for j in range(9)]
        report = smoothing_report(snapshots, [0.0] * 9, order=1, r=2.0)
        # constant integrand: every unit window equals the integrand
        np.testing.assert_allclose(report.window_values, report.integrand[0], rtol=1e-12)
        assert report.spread == pytest.approx(0.0, abs=1e-12)

    def test_smoothing_order_range(self, gp_branch):
        exact = classical_wave(gp_branch.wave(1.0))
        with pytest.raises(DiagnosticsError):
            smoothing_report([exact], [0.0], order=5, r=1.0)

    def test_local_residual_norm(self):
        grid = Grid(512, 40.0)
        g = np.exp(-0.5 * grid.x ** 2)
        far = HydroState(np.roll(g, 200), np.zeros(512), grid)
        assert local_residual_norm(far, radius=5.0) <= 1e-10
        assert local_residual_norm(HydroState(g, g, grid), radius=5.0) > 0.0

    def test_asymptotic_signature_keys(self, perturbed_run):
        _, tracked = perturbed_run
        signature = asymptotic_signature(tracked, radius=10.0, transient=0.5,
                                         theta_dot=np.zeros(len(tracked)))
        assert {"local_peak", "local_decrease", "c_variation_ratio", "theta_dot_final"} <= set(signature)
        assert signature["theta_dot_final"] == 0.0


class TestSeries:
    def test_long_form(self, perturbed_run, gp_branch):
        trajectory, tracked = perturbed_run
        series = DiagnosticsSeries(run_id="abc")
        assert list(series.to_dataframe().columns) == ["run_id", "diagnostic", "t", "value"]
        series.virial = virial_series(tracked, gp_branch, gamma=3.0)
        series.weighted = [weighted_decay_report(trajectory, tracked, rho=0.0)]
        frame = series.to_dataframe()
        assert set(frame["diagnostic"]) == {"n", "n_rate", "e_tilde_xnorm2", "weighted_decay_rho=0"}
        assert (frame["run_id"] == "abc").all()
        assert len(frame[frame["diagnostic"] == "n"]) == len(tracked)
        assert "virial" in series.summary()
