"""
Linearized operator H_c: discretizations, spectral structure near the sound
speed, coefficient fields of the virial form and the transonic constants.
"""

import numpy as np
import pytest

from src.config import Discretization
from src.errors import OperatorError, WindowViolation
from src.grid import Grid, HydroState
from src.models import beta_family, gross_pitaevskii
from src.operators import (
    apply_H_c,
    assemble_H_c,
    assemble_T_limit,
    coercivity_lc,
    constraint_vectors,
    difference_matrix,
    dual_variable,
    kernel_residual,
    q_coefficients,
    scan_lambda_minus,
    spectral_report,
    spectrum,
    sum_of_squares,
    transonic_constants,
    virial_flux_form,
    virial_matrix,
)


def smooth_state(grid, seed=0):
    rng = np.random.default_rng(seed)
    eta = np.zeros(grid.n)
    v = np.zeros(grid.n)
    scale = grid.L / 8.0
    for _ in range(3):
        center = rng.uniform(-scale, scale)
        eta += rng.normal() * np.exp(-0.5 * ((grid.x - center) / scale) ** 2)
        v += rng.normal() * np.exp(-0.5 * ((grid.x - center) / scale) ** 2)
    return HydroState(eta, v, grid)


class TestDifferenceMatrices:
    grid = Grid(256, 10.0)
    k = 2.0 * np.pi / 10.0

    def test_staggered_stencils_hit_midpoints(self):
        field = np.sin(self.k * self.grid.x)
        midpoint = self.k * np.cos(self.k * (self.grid.x + 0.5 * self.grid.dx))
        fd2 = difference_matrix(self.grid, Discretization.FD2) @ field
        fd4 = difference_matrix(self.grid, Discretization.FD4) @ field
        assert np.max(np.abs(fd2 - midpoint)) <= 2e-4 * self.k
        assert np.max(np.abs(fd4 - midpoint)) <= 1e-7 * self.k

    def test_spectral_matrix_is_collocated(self):
        field = np.sin(self.k * self.grid.x)
        spectral = difference_matrix(self.grid, Discretization.SPECTRAL) @ field
        np.testing.assert_allclose(spectral, self.k * np.cos(self.k * self.grid.x), atol=1e-10)

    def test_unknown_discretization(self):
        with pytest.raises(OperatorError):
            difference_matrix(self.grid, "fd6")


class TestLinearizedOperator:
    @pytest.mark.parametrize("discretization", Discretization.ALL)
    def test_exactly_symmetric(self, transonic_wave, discretization):
        operator = assemble_H_c(transonic_wave, discretization)
        assert operator.symmetry_error <= 1e-12
        assert operator.matrix.shape == (2 * transonic_wave.grid.n, 2 * transonic_wave.grid.n)

    def test_matrix_free_matches_spectral_matrix(self, transonic_wave):
        eps = smooth_state(transonic_wave.grid)
        dense = assemble_H_c(transonic_wave, Discretization.SPECTRAL).apply(eps)
        free = apply_H_c(transonic_wave, eps)
        scale = np.max(np.abs(free.stacked()))
        assert np.max(np.abs(dense.stacked() - free.stacked())) <= 1e-9 * scale

    def test_translation_mode_in_kernel(self, gp_wave):
        image = apply_H_c(gp_wave, gp_wave.derivative_state)
        ratio = np.linalg.norm(image.stacked()) / np.linalg.norm(gp_wave.derivative_state.stacked())
        assert ratio <= 1e-6
        spectral = assemble_H_c(gp_wave, Discretization.SPECTRAL)
        assert kernel_residual(spectral, gp_wave) <= 1e-6

    def test_dual_variable_of_kernel_vanishes(self, gp_wave):
        dual = dual_variable(gp_wave, gp_wave.derivative_state)
        assert np.max(np.abs(dual.stacked())) <= 1e-6

    def test_constraint_vectors(self, gp_wave):
        translation, momentum = constraint_vectors(gp_wave)
        np.testing.assert_array_equal(translation[:gp_wave.grid.n], gp_wave.eta_x)
        np.testing.assert_allclose(momentum[gp_wave.grid.n:], 0.5 * gp_wave.eta)


class TestSpectralStructure:
    @pytest.fixture(scope="class")
    def report(self, transonic_wave):
        return spectral_report(transonic_wave, discretization=Discretization.SPECTRAL)

    def test_single_negative_direction(self, report):
        assert report.negative_count == 1
        assert report.unconstrained_min < 0.0

    def test_kernel_alignment(self, report):
        assert report.kernel_alignment >= 0.999
        assert abs(report.kernel_eigenvalue) < abs(report.eigs[0])

    def test_coercive_under_constraints(self, report):
        assert report.lc > 0.0
        assert report.structure_ok

    def test_spectrum_and_constrained_minimum(self, transonic_wave, report):
        operator = assemble_H_c(transonic_wave, Discretization.SPECTRAL)
        values, vectors = spectrum(operator, 3)
        assert values.shape == (3,)
        assert vectors.shape == (2 * transonic_wave.grid.n, 3)
        assert np.all(np.diff(values) >= 0.0)
        assert values[0] < 0.0
        lc = coercivity_lc(operator, constraint_vectors(transonic_wave))
        assert lc == pytest.approx(report.lc, rel=1e-10)
        assert coercivity_lc(operator, []) < 0.0

    def test_fourth_order_stencil_agrees(self, transonic_wave):
        report = spectral_report(transonic_wave, count=3)
        assert report.discretization == Discretization.FD4
        assert report.symmetry_error == 0.0
        assert report.kernel_alignment >= 0.99

    def test_transonic_constants_attached(self, report):
        assert report.tau_c == pytest.approx(transonic_constants(gross_pitaevskii(), 1.38).tau)
        assert report.to_dict()["structure_ok"] is True


class TestCoefficientFields:
    @pytest.fixture(scope="class")
    def coefficients(self, transonic_wave):
        return q_coefficients(transonic_wave)

    def test_positivity(self, coefficients):
        assert coefficients.positivity["q1_over_eta_min"] > 0.0
        assert coefficients.positivity["q1_tilde_over_eta_min"] > 0.0

    def test_divergence_identity(self, coefficients):
        assert coefficients.identity_residual() <= 1e-6

    def test_tail_limits(self, coefficients):
        constants = transonic_constants(gross_pitaevskii(), 1.38)
        tails = coefficients.tail_limits()
        assert tails["q1_over_eta"] == pytest.approx(constants.k0, rel=1e-2)
        assert tails["q1_tilde_over_eta"] == pytest.approx(constants.k1, rel=1e-2)

    def test_sum_of_squares_nonnegative(self, coefficients, transonic_wave):
        for seed in range(5):
            assert sum_of_squares(coefficients, smooth_state(transonic_wave.grid, seed)) >= 0.0

    @pytest.mark.parametrize("wave_name, gap_floor", [("transonic_wave", 1.5), ("gp_wave", 0.5)])
    def test_flux_form_is_not_the_sum_of_squares(self, request, wave_name, gap_floor):
        # -4 <M_c S H_c d_x e~, e~> stays an order-one distance from the reduced form
        wave = request.getfixturevalue(wave_name)
        coefficients = q_coefficients(wave)
        fluxes, gaps = [], []
        for seed in range(5):
            e_tilde = smooth_state(wave.grid, seed)
            flux = virial_flux_form(coefficients, e_tilde)
            squares = sum_of_squares(coefficients, e_tilde)
            assert squares > 0.0
            fluxes.append(flux)
            gaps.append(abs(flux - squares) / squares)
        assert min(gaps) > gap_floor
        if wave_name == "transonic_wave":
            assert min(fluxes) < 0.0

    def test_virial_weight_bound(self, transonic_wave):
        weight = virial_matrix(transonic_wave, 10.0)
        assert weight.mc_sup > 0.0
        for seed in range(5):
            e_tilde = smooth_state(transonic_wave.grid, seed)
            assert abs(weight.quadratic(e_tilde)) <= weight.bound(e_tilde)


class TestTransonicConstants:
    def test_cubic_values_at_1_4(self):
        constants = transonic_constants(gross_pitaevskii(), 1.4)
        assert constants.nu2 == pytest.approx(0.04)
        assert constants.k0 == pytest.approx(2.08)
        assert constants.k1 == pytest.approx(1.4423077, rel=1e-7)
        assert constants.k3 == pytest.approx(-1.372)
        assert constants.k2 == pytest.approx(1.0348077, rel=1e-7)
        assert constants.tau == pytest.approx(0.0892, rel=1e-3)

    def test_tau_is_bottom_of_symbol(self):
        constants = transonic_constants(gross_pitaevskii(), 1.4)
        symbol = np.array([[constants.k2, constants.k3], [constants.k3, constants.k0]])
        assert constants.tau == pytest.approx(np.linalg.eigvalsh(symbol)[0], rel=1e-12)
        assert constants.lambda_minus(0.0) == pytest.approx(constants.tau, rel=1e-12)

    def test_identities(self):
        constants = transonic_constants(gross_pitaevskii(), 1.4)
        assert abs(constants.identity_gap) <= 1e-12
        assert abs(constants.sixteenth_gap) > 1e-3
        assert constants.limit_exact == pytest.approx(2.25)

    def test_ratio_approaches_limit(self):
        model = gross_pitaevskii()
        c = np.sqrt(2.0 - 0.0025)
        assert transonic_constants(model, c).tau_ratio == pytest.approx(2.25, rel=1e-2)

    def test_window_violations(self):
        with pytest.raises(WindowViolation):
            transonic_constants(beta_family(2.0), 1.0)
        with pytest.raises(WindowViolation) as info:
            transonic_constants(gross_pitaevskii(), 1.5)
        assert info.value.module == "operators"

    def test_limit_operator(self):
        constants = transonic_constants(gross_pitaevskii(), 1.4)
        grid = Grid(256, 40.0 / np.sqrt(constants.nu2))
        operator = assemble_T_limit(constants, grid)
        assert operator.symmetry_error <= 1e-12
        bottom = np.linalg.eigvalsh(operator.matrix)[0]
        assert bottom == pytest.approx(constants.tau, abs=1e-10)
        scan = scan_lambda_minus(constants, grid)
        assert scan["nondecreasing"]
        assert scan["minimum"] == pytest.approx(constants.tau, rel=1e-12)
