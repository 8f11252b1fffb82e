import math

import numpy as np
import numpy.testing as npt
import pytest

from src.convex_geometry import Disk, Ellipse, Scaled, Translated, sample_support, translate
from src.exterior_fbp import exterior_inclusion_check, solve_exterior, trial_update
from src.harness.base import CheckStatus
from src.harness.checks import gradient_monotonicity_check
from src.radial import outer_gradient


def test_disk_recovers_annulus_radius(settings, grid):
    params = settings.plaplace(2.0)
    sol = solve_exterior(sample_support(Disk(1.0), grid), 1.0 / (2.0 * math.log(2.0)), params, settings=settings)
    npt.assert_allclose(sol.h_Omega.values, 2.0, atol=5e-3)
    assert sol.fp_residual <= settings.fp_tol
    assert np.all(sol.h_Omega.values > sol.h_K.values)
    assert sol.h_Omega.is_convex()


def test_disk_oracle_for_p3(settings, grid):
    params = settings.plaplace(3.0)
    tau = outer_gradient(3.0, 1.0, 3.0)
    sol = solve_exterior(sample_support(Disk(1.0), grid), tau, params, settings=settings)
    npt.assert_allclose(sol.h_Omega.values, 3.0, rtol=5e-3)


def test_ellipse_solution(settings, grid):
    params = settings.plaplace(2.0)
    h_K = sample_support(Ellipse(2.0, 1.0), grid)
    sol = solve_exterior(h_K, 1.0, params, settings=settings)
    assert np.max(np.abs(sol.achieved_gradient - 1.0)) <= settings.fp_tol
    assert np.all(sol.h_Omega.values > h_K.values)
    assert sol.h_Omega.is_convex(params.tol_convex)
    assert len(sol.gradient_rows()) == grid.M
    assert sol.summary()["status"] == "converged"


def test_solution_is_translation_equivariant(settings, grid):
    params = settings.plaplace(2.0)
    tau = 1.0 / (2.0 * math.log(2.0))
    base = solve_exterior(sample_support(Ellipse(1.5, 1.0), grid), tau, params, settings=settings)
    moved = solve_exterior(sample_support(Translated((0.4, -0.3), Ellipse(1.5, 1.0)), grid), tau, params,
                           settings=settings)
    npt.assert_allclose(moved.h_Omega.values, translate(base.h_Omega, (0.4, -0.3)).values, atol=1e-5)
    npt.assert_allclose(moved.offset, [0.4, -0.3], atol=1e-12)


def test_trial_update(grid):
    h = sample_support(Disk(2.0), grid)
    npt.assert_allclose(trial_update(h, np.full(grid.M, 0.5), 0.5, 0.5).values, 2.0)
    npt.assert_allclose(trial_update(h, np.full(grid.M, 1.0), 0.5, 0.5).values, 3.0)
    with pytest.raises(ValueError):
        trial_update(h, np.full(grid.M, 0.5), 0.5, 0.0)
    with pytest.raises(ValueError):
        trial_update(h, np.zeros(grid.M), 0.5, 0.5)


def test_bad_tau(settings, grid):
    with pytest.raises(ValueError):
        solve_exterior(sample_support(Disk(1.0), grid), -1.0, settings.plaplace(2.0), settings=settings)


def test_inclusion_for_identical_data(settings):
    report = exterior_inclusion_check(Disk(1.0), Disk(1.0), 1.0, 1.0, 0.5, settings.plaplace(2.0), settings)
    assert report.status == CheckStatus.PASSED
    assert abs(report.margins["inclusion"]) <= report.tolerances["inclusion"]
    assert report.quantities["homothetic_within_tolerance"]


def test_inclusion_for_disk_and_ellipse(settings):
    report = exterior_inclusion_check(Disk(1.0), Ellipse(2.0, 1.0), 1.0, 1.0, 0.5, settings.plaplace(2.0), settings)
    assert report.passed
    assert report.margins["inclusion"] > report.tolerances["inclusion"]
    assert not report.quantities["homothetic_within_tolerance"]


def test_scaled_data_gives_scaled_solution(settings, grid):
    params = settings.plaplace(2.0)
    base = solve_exterior(sample_support(Ellipse(1.5, 1.0), grid), 1.0, params, settings=settings)
    scaled = solve_exterior(sample_support(Scaled(2.0, Ellipse(1.5, 1.0)), grid), 0.5, params, settings=settings)
    npt.assert_allclose(scaled.h_Omega.values, 2.0 * base.h_Omega.values, rtol=1e-6)


def test_smaller_tau_gives_larger_domain(settings, grid):
    params = settings.plaplace(2.0)
    h_K = sample_support(Ellipse(2.0, 1.0), grid)
    steep = solve_exterior(h_K, 1.0, params, settings=settings)
    shallow = solve_exterior(h_K, 0.8, params, settings=settings)
    assert np.all(shallow.h_Omega.values > steep.h_Omega.values)


def test_solution_keeps_the_symmetries_of_the_data(settings, grid):
    sol = solve_exterior(sample_support(Ellipse(2.0, 1.0), grid), 1.0, settings.plaplace(2.0), settings=settings)
    values = sol.h_Omega.values
    npt.assert_allclose(np.roll(values, grid.M // 2), values, atol=1e-5)
    npt.assert_allclose(values[(-np.arange(grid.M)) % grid.M], values, atol=1e-5)


def test_gradient_grows_toward_the_data(settings, grid):
    sol = solve_exterior(sample_support(Ellipse(2.0, 1.0), grid), 1.0, settings.plaplace(2.0), settings=settings)
    report = gradient_monotonicity_check(sol.ring)
    assert report.passed
    assert report.quantities["max_gradient"] > report.quantities["min_gradient"]
