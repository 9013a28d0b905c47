"""
Modulation decomposition (a, c, eps), its tracking along runs, and the phase
parameter of classical trajectories.
"""

import numpy as np
import pytest

from src.config import Formulation
from src.dynamics import TRIPLE_JUMP, run
from src.errors import ModulationError
from src.grid import HydroState
from src.modulation import bump, decompose, phase_theta, reference_pairing, track
from src.profile import classical_wave


def gaussian_state(grid, center, amplitude):
    shape = amplitude * np.exp(-0.5 * (grid.x - center) ** 2)
    return HydroState(shape, shape, grid)


class TestDecompose:
    def test_recovers_translation(self, gp_branch):
        wave = gp_branch.wave(1.0)
        state = wave.state.shifted(-0.3)
        result = decompose(state, gp_branch, (0.0, 1.0))
        assert result.a == pytest.approx(0.3, abs=1e-8)
        assert result.c == pytest.approx(1.0, abs=1e-8)
        assert result.eps_xnorm <= 1e-6

    def test_orthogonality_of_residual(self, gp_branch):
        wave = gp_branch.wave(1.0)
        state = wave.state + gaussian_state(wave.grid, 2.0, 1e-3)
        result = decompose(state, gp_branch, (0.0, 1.0))
        assert max(abs(r) for r in result.residuals) <= 1e-9
        fitted = gp_branch.wave(result.c)
        assert abs(result.eps.inner(fitted.derivative_state)) <= 1e-9
        assert abs(result.eps.inner(fitted.momentum_gradient)) <= 1e-9
        assert 0.0 < result.eps_xnorm < 1e-2

    def test_leaves_neighbourhood(self, gp_branch):
        wave = gp_branch.wave(1.0)
        state = wave.state + gaussian_state(wave.grid, 0.0, 0.3)
        with pytest.raises(ModulationError) as info:
            decompose(state, gp_branch, (0.0, 1.0))
        assert info.value.module == "modulation"
        assert info.value.last_iterate is not None

    def test_radius_is_enforced(self, gp_branch):
        wave = gp_branch.wave(1.0)
        state = wave.state + gaussian_state(wave.grid, 2.0, 1e-3)
        with pytest.raises(ModulationError):
            decompose(state, gp_branch, (0.0, 1.0), radius=1e-6)


class TestTrack:
    def test_exact_soliton_track(self, gp, gp_branch):
        wave = gp_branch.wave(1.0)
        trajectory = run(wave.state, 1.0, gp, t_snap=0.25)
        tracked = track(trajectory, gp_branch, (0.0, 1.0))
        assert len(tracked) == 5
        assert not tracked.truncated
        np.testing.assert_allclose(tracked.a, np.asarray(tracked.times), atol=1e-6)
        np.testing.assert_allclose(tracked.c, 1.0, atol=1e-8)
        assert tracked.max_ortho_residual <= 1e-9
        assert tracked.sup_eps <= 1e-6

    def test_comoving_track_reports_lab_position(self, gp, gp_branch):
        wave = gp_branch.wave(1.0)
        trajectory = run(wave.state, 1.0, gp, t_snap=0.5, frame_speed=1.0)
        tracked = track(trajectory, gp_branch, (0.0, 1.0))
        np.testing.assert_allclose(tracked.a_frame, 0.0, atol=1e-6)
        np.testing.assert_allclose(tracked.a, [0.0, 0.5, 1.0], atol=1e-6)

    def test_dataframe_columns(self, gp, gp_branch):
        trajectory = run(gp_branch.wave(1.0).state, 0.5, gp, t_snap=0.25)
        frame = track(trajectory, gp_branch, (0.0, 1.0)).to_dataframe()
        assert list(frame.columns) == ["t", "a", "c", "theta", "eps_xnorm", "a_dot_minus_c", "c_dot"]
        assert frame["theta"].isna().all()
        assert np.all(np.abs(frame["a_dot_minus_c"]) <= 1e-5)


class TestPhase:
    def test_bump_shape(self, gp_branch):
        grid = gp_branch.grid
        chi = bump(grid, 5.0)
        assert chi[grid.origin] == pytest.approx(1.0)
        assert np.all(chi[np.abs(grid.x) >= 5.0] == 0.0)
        assert np.all(chi >= 0.0)

    def test_reference_pairing_is_large_enough(self, gp_branch):
        wave = gp_branch.wave(1.0)
        width, pairing = reference_pairing(wave, 5.0)
        centre = abs(classical_wave(wave).psi[wave.grid.origin])
        assert abs(pairing) >= 0.5 * centre * np.sum(bump(wave.grid, width)) * wave.grid.dx

    def test_phase_of_rotated_soliton(self, gp_branch):
        wave = gp_branch.wave(1.0)
        exact = classical_wave(wave)
        snapshots = [exact, exact.with_phase(0.2).with_time(1.0), exact.with_phase(-2.5).with_time(2.0)]
        series = phase_theta(snapshots, [0.0, 0.0, 0.0], wave, 5.0)
        np.testing.assert_allclose(series.theta, [0.0, 0.2, -2.5], atol=1e-12)
        assert not series.flags.any()

    def test_unwrapping_across_pi(self, gp_branch):
        wave = gp_branch.wave(1.0)
        exact = classical_wave(wave)
        angles = [0.0, 2.0, 4.0, 6.0]
        snapshots = [exact.with_phase(theta).with_time(float(j)) for j, theta in enumerate(angles)]
        series = phase_theta(snapshots, [0.0] * 4, wave, 5.0)
        np.testing.assert_allclose(series.theta, angles, atol=1e-12)
        np.testing.assert_allclose(series.theta_dot, 2.0, atol=1e-12)

    def test_track_attaches_phase_for_classical_runs(self, gp, gp_branch):
        wave = gp_branch.wave(1.0)
        trajectory = run(classical_wave(wave), 0.5, gp, t_snap=0.25,
                         formulation=Formulation.CLASSICAL, splitting=TRIPLE_JUMP)
        tracked = track(trajectory, gp_branch, (0.0, 1.0), bump_width=5.0)
        assert tracked.theta is not None
        np.testing.assert_allclose(tracked.theta, 0.0, atol=1e-6)
