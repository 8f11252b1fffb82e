import math

import numpy as np
import numpy.testing as npt
import pytest

from src.convex_geometry import Disk, Ellipse, Scaled, Translated, sample_support
from src.errors import InvalidBodyError
from src.interior_fbp import (
    BernoulliConstantResult,
    bernoulli_constant,
    bracket_details,
    is_subsolution,
    lambda_ball,
    lambda_bracket,
    _descent_folded,
    probe_feasibility,
    solve_interior,
    uniqueness_probe,
)


def test_lambda_ball_closed_forms():
    npt.assert_allclose(lambda_ball(1.0, 2.0), math.e)
    npt.assert_allclose(lambda_ball(2.0, 2.0), math.e / 2.0)
    npt.assert_allclose(lambda_ball(1.0, 3.0), 2.0)
    npt.assert_allclose(lambda_ball(1.0, 2.0, N=3), 4.0)
    with pytest.raises(ValueError):
        lambda_ball(-1.0, 2.0)


def test_bracket_collapses_for_disks(grid):
    lo, hi = lambda_bracket(sample_support(Disk(1.0), grid), 2.0)
    npt.assert_allclose([lo, hi], [math.e, math.e], rtol=1e-6)


def test_bracket_for_ellipse(grid):
    details = bracket_details(sample_support(Ellipse(2.0, 1.0), grid), 2.0)
    npt.assert_allclose(details["outer_ball_bound"], math.e / 2.0, rtol=1e-6)
    npt.assert_allclose(details["min_width_bound"], 1.0, rtol=1e-12)
    npt.assert_allclose(details["lo"], math.e / 2.0, rtol=1e-6)
    npt.assert_allclose(details["hi"], math.e, rtol=1e-6)


def test_maximal_branch_oracle(settings, grid):
    params = settings.plaplace(2.0)
    sol = solve_interior(sample_support(Disk(1.0), grid), 4.0, params, settings=settings)
    assert sol.feasible
    npt.assert_allclose(sol.h_K.values, 0.6996, atol=1e-2)
    assert sol.fp_residual <= settings.fp_tol
    assert np.all(sol.h_K.values < sol.h_Omega.values)
    assert is_subsolution(sol.ring.H, 4.0, params).passed
    assert not is_subsolution(sol.ring.H, 2.0, params).passed


def test_scaled_start_finds_the_same_set(settings, grid):
    params = settings.plaplace(2.0)
    h = sample_support(Disk(1.0), grid)
    parallel = solve_interior(h, 4.0, params, settings=settings, init="parallel")
    scaled = solve_interior(h, 4.0, params, settings=settings, init="scaled")
    npt.assert_allclose(scaled.h_K.values, parallel.h_K.values, atol=1e-4)
    with pytest.raises(ValueError):
        solve_interior(h, 4.0, params, settings=settings, init="random")


def test_below_the_constant_is_infeasible(settings, grid):
    result = solve_interior(sample_support(Disk(1.0), grid), 2.0, settings.plaplace(2.0), settings=settings)
    assert not result.feasible
    assert result.reason in ("fold", "degenerate")
    assert result.max_gradient > 2.0
    assert result.summary()["status"] == "infeasible"


def test_probe_returns_a_hot_start(settings, grid):
    params = settings.plaplace(2.0)
    h = sample_support(Disk(1.0), grid)
    probe = probe_feasibility(h, 3.5, params, settings)
    assert probe.feasible
    assert probe.hot_start is not None
    again = probe_feasibility(h, 3.0, params, settings, warm_start=probe.hot_start)
    assert again.feasible


@pytest.mark.parametrize("p, expected", [(2.0, math.e), (3.0, 2.0)])
def test_disk_constant(settings, grid, p, expected):
    result = bernoulli_constant(sample_support(Disk(1.0), grid), p, settings=settings)
    npt.assert_allclose(result.lambda_, expected, rtol=1e-2)
    lo, hi = result.bracket
    assert lo < result.lambda_ < hi
    assert result.converged
    feasible = [e["tau"] for e in result.log if e["feasible"]]
    infeasible = [e["tau"] for e in result.log if not e["feasible"]]
    assert min(feasible) > max(infeasible)


def test_descent_folded_detects_a_plateau_above_tau():
    plateau = [2.73 + 0.01 * 0.5**k for k in range(21)]
    assert _descent_folded(plateau, 2.72, window=10)
    assert not _descent_folded(plateau[:15], 2.72, window=10)


def test_descent_folded_keeps_going_toward_tau():
    converging = [4.0 + 2.0 * 0.8**k for k in range(21)]
    assert not _descent_folded(converging, 4.0, window=10)
    accelerating = [5.0 - 0.01 * k * k for k in range(21)]
    assert not _descent_folded(accelerating, 4.0, window=10)


@pytest.mark.parametrize("tau, feasible", [(2.70, False), (2.74, True)])
def test_near_critical_tau_is_classified(settings, grid, tau, feasible):
    verdict = probe_feasibility(sample_support(Disk(1.0), grid), tau, settings.plaplace(2.0), settings)
    assert verdict.feasible is feasible
    assert verdict.iterations <= settings.max_trial
    if not feasible:
        assert verdict.reason in ("fold", "degenerate")
        assert verdict.max_gradient > tau


def test_iteration_cap_is_an_infeasible_verdict(settings, grid):
    capped = settings.with_overrides(max_trial=3)
    verdict = probe_feasibility(sample_support(Disk(1.0), grid), 2.70, capped.plaplace(2.0), capped)
    assert not verdict.feasible
    assert verdict.reason == "fold"
    assert verdict.iterations == 3


def test_inscribed_disk_certifies_the_upper_end(settings, grid):
    h = sample_support(Ellipse(2.0, 1.0), grid)
    verdict = probe_feasibility(h, math.e * settings.bracket_pad, settings.plaplace(2.0), settings)
    assert verdict.feasible
    assert verdict.max_gradient <= math.e * settings.bracket_pad * (1.0 + settings.fp_tol)

def test_ellipse_constant_inside_the_analytic_bracket(settings, grid):
    result = bernoulli_constant(sample_support(Ellipse(2.0, 1.0), grid), 2.0, settings=settings)
    lo, hi = result.analytic_bracket
    assert lo / settings.bracket_pad <= result.lambda_ <= hi * settings.bracket_pad
    assert result.converged


def test_constant_scales_inversely(settings, grid):
    base = bernoulli_constant(sample_support(Disk(1.0), grid), 2.0, settings=settings).lambda_
    doubled = bernoulli_constant(sample_support(Scaled(2.0, Disk(1.0)), grid), 2.0, settings=settings).lambda_
    npt.assert_allclose(2.0 * doubled, base, rtol=2 * settings.bisect_tol)


def test_uniqueness_for_disk(settings, grid):
    constant = BernoulliConstantResult(
        lambda_=2.8, bracket=(2.6, 3.0), analytic_bracket=(math.e, math.e),
        iterations=0, log=[], bisect_tol=settings.bisect_tol, converged=False,
    )
    report = uniqueness_probe(sample_support(Disk(1.0), grid), 2.0, settings=settings, constant=constant)
    assert report.passed
    assert report.quantities["tau"] == 3.0
    assert report.quantities["hausdorff_distance"] <= report.tolerances["uniqueness"]


@pytest.mark.parametrize("body, p", [(Ellipse(2.0, 1.0), 2.0), (Disk(1.0), 3.0)])
def test_uniqueness_at_the_computed_constant(settings, grid, body, p):
    report = uniqueness_probe(sample_support(body, grid), p, settings=settings)
    assert report.passed
    assert report.quantities["tau"] >= report.quantities["lambda"]


def test_uniqueness_tolerance_ignores_translation(settings, grid):
    constant = BernoulliConstantResult(
        lambda_=2.8, bracket=(2.6, 3.0), analytic_bracket=(math.e, math.e),
        iterations=0, log=[], bisect_tol=settings.bisect_tol, converged=False,
    )
    here = uniqueness_probe(sample_support(Disk(1.0), grid), 2.0, settings=settings, constant=constant)
    there = uniqueness_probe(sample_support(Translated((5.0, 0.0), Disk(1.0)), grid), 2.0,
                             settings=settings, constant=constant)
    npt.assert_allclose(there.tolerances["uniqueness"], here.tolerances["uniqueness"], rtol=1e-9)
    npt.assert_allclose(here.tolerances["uniqueness"], settings.uniq_tol_rel, rtol=1e-9)
    assert there.passed

def test_input_validation(settings, grid):
    params = settings.plaplace(2.0)
    with pytest.raises(ValueError):
        solve_interior(sample_support(Disk(1.0), grid), 0.0, params, settings=settings)
    with pytest.raises(ValueError):
        bernoulli_constant(sample_support(Disk(1.0), grid), 3.0, params=params, settings=settings)
    nonconvex = sample_support(Disk(1.0), grid).with_values(1.0 + 0.3 * np.cos(3 * grid.theta))
    with pytest.raises(InvalidBodyError):
        solve_interior(nonconvex, 4.0, params, settings=settings)
