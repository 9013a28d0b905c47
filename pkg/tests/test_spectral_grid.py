"""
Periodic grid, Fourier calculus, field states and weighted norms.
"""

import numpy as np
import pytest

from src.errors import GridError
from src.grid import (
    ClassicalState,
    Grid,
    HydroState,
    cumulative_integral,
    derivatives,
    frame_coordinate,
    integrate,
    metric_d,
    mirror,
    resample,
    shift,
    spectral_derivative,
    windowed_derivative,
    x_norm,
)


def gaussian(x, center=0.0):
    return np.exp(-0.5 * (x - center) ** 2)


class TestGrid:
    def test_layout(self):
        grid = Grid(512, 20.0)
        assert grid.dx == pytest.approx(40.0 / 512)
        assert grid.x[0] == -20.0
        assert grid.x[grid.origin] == pytest.approx(0.0, abs=1e-14)
        assert grid.k_max == pytest.approx(np.pi / grid.dx)

    def test_for_speed(self):
        grid = Grid.for_speed(0.5, n=256)
        assert grid.L == pytest.approx(80.0)

    @pytest.mark.parametrize("n, L", [(300, 10.0), (128, 10.0), (512, 0.0), (512, -1.0)])
    def test_invalid(self, n, L):
        with pytest.raises(GridError):
            Grid(n, L)

    def test_derivative_order_bounds(self):
        with pytest.raises(GridError):
            Grid(256, 10.0).multiplier(5)


class TestCalculus:
    grid = Grid(512, 20.0)

    def test_derivatives_of_trigonometric_mode(self):
        k = 3.0 * np.pi / self.grid.L
        field = np.sin(k * self.grid.x)
        np.testing.assert_allclose(spectral_derivative(field, self.grid, 1), k * np.cos(k * self.grid.x), atol=1e-11)
        first, second = derivatives(field, self.grid, (1, 2))
        np.testing.assert_allclose(second, -k * k * field, atol=1e-10)

    def test_complex_derivative(self):
        k = 2.0 * np.pi / self.grid.L
        field = np.exp(1j * k * self.grid.x)
        np.testing.assert_allclose(spectral_derivative(field, self.grid, 1), 1j * k * field, atol=1e-11)

    def test_windowed_derivative_of_non_periodic_field(self):
        fine = Grid(2048, 20.0)
        x = fine.x
        inner = np.abs(x) <= 0.5 * fine.L
        exact = 1.0 / np.cosh(x) ** 2
        np.testing.assert_allclose(windowed_derivative(np.tanh(x), fine)[inner], exact[inner], atol=1e-9)

    def test_shift_is_translation(self):
        x = self.grid.x
        np.testing.assert_allclose(shift(gaussian(x), self.grid, 0.37), gaussian(x + 0.37), atol=1e-13)

    def test_resample_up_and_down(self):
        fine = Grid(1024, 20.0)
        up = resample(gaussian(self.grid.x), self.grid, fine)
        np.testing.assert_allclose(up, gaussian(fine.x), atol=1e-13)
        down = resample(gaussian(fine.x), fine, self.grid)
        np.testing.assert_allclose(down, gaussian(self.grid.x), atol=1e-13)

    def test_resample_requires_same_box(self):
        with pytest.raises(GridError):
            resample(np.zeros(512), self.grid, Grid(512, 10.0))

    def test_integrate(self):
        assert integrate(gaussian(self.grid.x), self.grid) == pytest.approx(np.sqrt(2.0 * np.pi), rel=1e-13)

    def test_cumulative_integral(self):
        x = self.grid.x
        primitive, mean = cumulative_integral(1.0 / np.cosh(x) ** 2, self.grid)
        inner = np.abs(x) <= 0.5 * self.grid.L
        np.testing.assert_allclose(primitive[inner], np.tanh(x[inner]), atol=1e-12)
        assert mean * 2.0 * self.grid.L == pytest.approx(2.0, rel=1e-12)

    def test_frame_coordinate_wraps(self):
        y = frame_coordinate(self.grid, 15.0)
        assert np.all(y >= -self.grid.L) and np.all(y < self.grid.L)
        assert y[self.grid.origin] == pytest.approx(-15.0)
        assert y[0] == pytest.approx(5.0)

    def test_mirror(self):
        k = np.pi / self.grid.L
        field = np.sin(k * self.grid.x)
        np.testing.assert_allclose(mirror(field), -field, atol=1e-14)


class TestStates:
    grid = Grid(512, 20.0)

    def test_shape_mismatch(self):
        with pytest.raises(GridError):
            HydroState(np.zeros(10), np.zeros(512), self.grid)

    def test_fields_are_read_only(self):
        state = HydroState.zeros(self.grid)
        with pytest.raises(ValueError):
            state.eta[0] = 1.0

    def test_arithmetic_and_inner(self):
        g = gaussian(self.grid.x)
        a = HydroState(g, np.zeros(512), self.grid)
        b = HydroState(np.zeros(512), g, self.grid)
        total = (a + b).scaled(2.0)
        np.testing.assert_allclose(total.eta, 2.0 * g)
        assert (total - a - a).inner(a) == pytest.approx(0.0, abs=1e-14)
        assert a.inner(a) == pytest.approx(np.sqrt(np.pi), rel=1e-12)
        np.testing.assert_allclose(a.swapped().v, g)

    def test_stacked_round_trip(self):
        state = HydroState(gaussian(self.grid.x), gaussian(self.grid.x, 1.0), self.grid, time=2.0)
        back = HydroState.from_stacked(state.stacked(), self.grid, 2.0)
        np.testing.assert_array_equal(back.v, state.v)

    def test_mirrored_flips_velocity(self):
        g = gaussian(self.grid.x, 2.0)
        image = HydroState(g, g, self.grid).mirrored()
        np.testing.assert_allclose(image.eta, gaussian(self.grid.x, -2.0), atol=1e-14)
        np.testing.assert_allclose(image.v, -gaussian(self.grid.x, -2.0), atol=1e-14)

    def test_classical_twist(self):
        twist = 0.05
        state = ClassicalState(np.ones(512, dtype=complex), self.grid, twist=twist)
        np.testing.assert_allclose(state.psi, np.exp(-1j * twist * self.grid.x))
        np.testing.assert_allclose(state.derivative(1), -1j * twist * state.psi, atol=1e-12)
        np.testing.assert_allclose(state.with_phase(0.3).psi, state.psi * np.exp(0.3j))


class TestNorms:
    grid = Grid(1024, 20.0)

    def test_energy_norm_of_gaussian(self):
        # g = exp(-x^2/2): int g^2 = sqrt(pi), int g'^2 = sqrt(pi)/2
        state = HydroState(gaussian(self.grid.x), np.zeros(1024), self.grid)
        assert x_norm(state) == pytest.approx(np.sqrt(1.5 * np.sqrt(np.pi)), rel=1e-12)

    def test_plain_l2(self):
        state = HydroState(np.zeros(1024), gaussian(self.grid.x), self.grid)
        assert x_norm(state, l=-1) == pytest.approx(np.pi ** 0.25, rel=1e-12)

    def test_weight_grows_away_from_center(self):
        near = HydroState(gaussian(self.grid.x), np.zeros(1024), self.grid)
        far = near.shifted(-5.0)
        assert x_norm(far, rho=2.0) > x_norm(near, rho=2.0)
        assert x_norm(far, rho=2.0, center=5.0) == pytest.approx(x_norm(near, rho=2.0), rel=1e-6)

    def test_invalid_order(self):
        with pytest.raises(GridError) as info:
            x_norm(HydroState.zeros(self.grid), l=-2)
        assert info.value.module == "spectral_grid"
        assert info.value.to_dict()["context"]["l"] == -2

    def test_metric(self):
        background = ClassicalState(np.ones(1024, dtype=complex), self.grid)
        assert metric_d(background, background) == 0.0
        assert metric_d(background, background.with_phase(0.1)) == pytest.approx(abs(np.exp(0.1j) - 1.0))
