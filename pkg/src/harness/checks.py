"""
End-to-end inequality checks.

Each check samples its bodies on the settings grid, runs the solvers and
returns a CheckReport. Margins are signed so that a check passes when every
margin is >= -tolerance; tolerances are derived from the solver tolerances
in the settings and recorded in the report.
"""

import math
import logging
from typing import List, Optional

import numpy as np

from ..convex_geometry import (
    BodySpec,
    MinkowskiCombo,
    Rotated,
    Scaled,
    Translated,
    area,
    ball_support,
    hausdorff_distance,
    homothety_defect,
    inradius_outradius,
    mean_width,
    minkowski_combine,
    sample_support,
    steiner_point,
    symmetry_order,
    urysohn_gap,
)
from ..errors import InfeasibleTau
from ..interior_fbp import bernoulli_constant, is_subsolution, lambda_ball, solve_interior
from ..minkowski_comb import combine_solutions, gradient_harmonic_mean_check, tau_harmonic_mean
from ..ring_solver import RingSolution, boundary_gradient, plaplacian_residual, residual_scale, solve_ring
from ..settings import LabSettings
from .base import CheckReport, Table

logger = logging.getLogger(__name__)

STRICT_FACTOR = 5.0
DISTANCE_FLOOR = 1e-12


def _lambda(body: BodySpec, p: float, settings: LabSettings) -> float:
    h = sample_support(body, settings.grid())
    return bernoulli_constant(h, p, settings=settings).lambda_


def _lambda_tol(settings: LabSettings, scale: float) -> float:
    return 2.0 * settings.bisect_tol * scale


def bm_check(omega0: BodySpec, omega1: BodySpec, lam: float, p: float,
             settings: Optional[LabSettings] = None) -> CheckReport:
    """Lambda(Omega_lam) <= ((1-lam)/Lambda(Omega0) + lam/Lambda(Omega1))^-1."""
    settings = settings or LabSettings()
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    with CheckReport.timed("bm") as report:
        lam0 = _lambda(omega0, p, settings)
        lam1 = _lambda(omega1, p, settings)
        if lam == 0.0:
            lam_mix = lam0
        elif lam == 1.0:
            lam_mix = lam1
        else:
            lam_mix = _lambda(MinkowskiCombo(((1.0 - lam, omega0), (lam, omega1))), p, settings)

        rhs = tau_harmonic_mean(lam0, lam1, lam)
        margin = rhs - lam_mix
        tol = _lambda_tol(settings, rhs)
        grid = settings.grid()
        defect = homothety_defect(sample_support(omega0, grid), sample_support(omega1, grid))
        equality = abs(margin) <= tol
        homothetic = defect <= settings.uniq_tol_rel

        report.inputs = {"omega0": omega0.to_dict(), "omega1": omega1.to_dict(), "lambda": lam, "p": p}
        report.quantities = {
            "lambda_omega0": lam0,
            "lambda_omega1": lam1,
            "lambda_mix": lam_mix,
            "harmonic_mean": rhs,
            "strict": margin > STRICT_FACTOR * tol,
            "equality_within_tolerance": equality,
            "homothety_defect": defect,
            "homothetic_within_tolerance": homothetic,
            "equality_matches_homothety": equality == homothetic,
        }
        report.margins = {"brunn_minkowski": margin}
        report.tolerances = {"brunn_minkowski": tol}
        report.judge()
    return report


def urysohn_check(omega: BodySpec, p: float, settings: Optional[LabSettings] = None) -> CheckReport:
    """Lambda(Omega) >= Lambda(B_{b/2}) with b the mean width."""
    settings = settings or LabSettings()
    with CheckReport.timed("urysohn") as report:
        h = sample_support(omega, settings.grid())
        result = bernoulli_constant(h, p, settings=settings)
        b = mean_width(h)
        bound = lambda_ball(b / 2.0, p, 2)
        outer_bound = lambda_ball(inradius_outradius(h).R_out, p, 2)
        margin = result.lambda_ - bound
        tol = _lambda_tol(settings, result.lambda_)

        report.inputs = {"omega": omega.to_dict(), "p": p}
        report.quantities = {
            "lambda": result.lambda_,
            "bracket": list(result.bracket),
            "mean_width": b,
            "mean_width_bound": bound,
            "outer_radius_bound": outer_bound,
            "urysohn_area_gap": urysohn_gap(h),
            "strict": margin > STRICT_FACTOR * tol,
        }
        report.margins = {"urysohn": margin}
        report.tolerances = {"urysohn": tol}
        report.judge()
    return report


def hadwiger_sequence(omega: BodySpec, p: float, n_max: int, settings: Optional[LabSettings] = None,
                      compute_lambda: bool = True) -> CheckReport:
    """
    Rotation means Omega_n = (1/n) sum_k rho_k Omega about the Steiner point.

    rho_k rotates by 2*pi*k/(q*n) where q is the rotational symmetry order of
    Omega on the grid (q = 1 for bodies without symmetry), so every n removes
    new harmonics. Passes when the mean width stays fixed, Lambda(Omega_n) does
    not increase and the distance to B_{b/2} strictly decreases.
    """
    settings = settings or LabSettings()
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    with CheckReport.timed("hadwiger") as report:
        grid = settings.grid()
        h = sample_support(omega, grid)
        s = steiner_point(h)
        q = symmetry_order(h)
        centred = Translated((-s[0], -s[1]), omega)
        b0 = mean_width(h)

        rows: List[List[float]] = []
        widths, lambdas, distances = [], [], []
        for n in range(1, n_max + 1):
            terms = tuple((1.0 / n, Rotated(2.0 * math.pi * k / (q * n), centred)) for k in range(1, n + 1))
            mean_n = Translated((s[0], s[1]), MinkowskiCombo(terms))
            h_n = sample_support(mean_n, grid)
            b_n = mean_width(h_n)
            ball = ball_support(grid, b_n / 2.0, steiner_point(h_n))
            distance = hausdorff_distance(h_n, ball)
            lam_n = bernoulli_constant(h_n, p, settings=settings).lambda_ if compute_lambda else float("nan")
            widths.append(b_n)
            distances.append(distance)
            lambdas.append(lam_n)
            rows.append([n, b_n, lam_n, distance])
            logger.info(f"Hadwiger n={n}: b={b_n:.10g} lambda={lam_n:.6g} distance={distance:.3e}")

        floor = DISTANCE_FLOOR * h.scale
        drift = max(abs(w - b0) for w in widths)
        decreases = [distances[i - 1] - distances[i] for i in range(1, len(distances))
                     if distances[i - 1] > floor]
        strictly_decreasing = all(d > 0 for d in decreases)

        report.inputs = {"omega": omega.to_dict(), "p": p, "n_max": n_max}
        report.quantities = {
            "symmetry_order": q,
            "mean_width": b0,
            "strictly_decreasing": strictly_decreasing,
        }
        report.margins = {"mean_width": -drift, "distance_decrease": min(decreases, default=0.0)}
        report.tolerances = {"mean_width": 1e-8 * max(1.0, b0), "distance_decrease": 0.0}
        if compute_lambda:
            tol = _lambda_tol(settings, lambdas[0])
            steps = [lambdas[i - 1] - lambdas[i] for i in range(1, len(lambdas))]
            report.margins["lambda_nonincreasing"] = min(steps)
            report.margins["lambda_below_omega"] = min(lambdas[0] - x for x in lambdas)
            report.tolerances["lambda_nonincreasing"] = tol
            report.tolerances["lambda_below_omega"] = tol
        report.tables["hadwiger"] = Table(["n", "mean_width", "lambda", "hausdorff_to_ball"], rows)
        report.judge()
        report.passed = report.passed and strictly_decreasing
    return report


def homogeneity_check(omega: BodySpec, alpha: float, p: float,
                      settings: Optional[LabSettings] = None) -> CheckReport:
    """Lambda(alpha Omega) = Lambda(Omega)/alpha."""
    settings = settings or LabSettings()
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    with CheckReport.timed("homogeneity") as report:
        base = _lambda(omega, p, settings)
        scaled = base if alpha == 1.0 else _lambda(Scaled(alpha, omega), p, settings)
        error = abs(alpha * scaled - base) / base

        report.inputs = {"omega": omega.to_dict(), "alpha": alpha, "p": p}
        report.quantities = {"lambda": base, "lambda_scaled": scaled, "relative_error": error}
        report.margins = {"homogeneity": -error}
        report.tolerances = {"homogeneity": 2.0 * settings.bisect_tol}
        report.judge()
    return report


def largest_set_inclusion_check(omega0: BodySpec, omega1: BodySpec, tau0: float, tau1: float,
                                lam: float, p: float, settings: Optional[LabSettings] = None) -> CheckReport:
    """
    (1-lam) K(Omega0, tau0) + lam K(Omega1, tau1) inside K(Omega_lam, tau_lam).

    Raises:
        InfeasibleTau: one of the tau_i lies below Lambda(Omega_i)
    """
    settings = settings or LabSettings()
    with CheckReport.timed("interior-inclusion") as report:
        grid = settings.grid()
        params = settings.plaplace(p)
        h0 = sample_support(omega0, grid)
        h1 = sample_support(omega1, grid)

        sols = []
        for label, h, tau in (("omega0", h0, tau0), ("omega1", h1, tau1)):
            sol = solve_interior(h, tau, params, settings=settings)
            if not sol.feasible:
                raise InfeasibleTau(f"tau={tau} is below the Bernoulli constant of {label}", sol.summary())
            sols.append(sol)

        tau_lam = tau_harmonic_mean(tau0, tau1, lam)
        h_lam = minkowski_combine([1.0 - lam, lam], [h0, h1])
        sol_lam = solve_interior(h_lam, tau_lam, params, settings=settings)
        if not sol_lam.feasible:
            raise InfeasibleTau(f"tau_lambda={tau_lam} infeasible for the combined domain", sol_lam.summary())

        combo = minkowski_combine([1.0 - lam, lam], [sols[0].h_K, sols[1].h_K])
        margin = float(np.min(sol_lam.h_K.values - combo.values))
        tol = settings.incl_tol_rel * h_lam.scale

        report.inputs = {
            "omega0": omega0.to_dict(), "omega1": omega1.to_dict(),
            "tau0": tau0, "tau1": tau1, "lambda": lam, "p": p,
        }
        report.quantities = {
            "tau_lambda": tau_lam,
            "fp_residuals": [sols[0].fp_residual, sols[1].fp_residual, sol_lam.fp_residual],
            "equality_within_tolerance": abs(margin) <= tol,
            "homothety_defect": homothety_defect(h0, h1),
        }
        report.margins = {"inclusion": margin}
        report.tolerances = {"inclusion": tol}
        report.judge()
    return report


def gradient_monotonicity_check(sol: RingSolution, mono_tol_rel: float = 1e-6) -> CheckReport:
    """-1/h_t is nondecreasing in t for every direction (forward differences)."""
    with CheckReport.timed("monotonicity") as report:
        H = sol.H
        gradients = -sol.params.dt / np.diff(H, axis=1)
        increments = np.diff(gradients, axis=1)
        tol = mono_tol_rel * float(np.max(gradients))
        margin = float(np.min(increments))

        report.inputs = sol.summary()
        report.quantities = {
            "min_gradient": float(np.min(gradients)),
            "max_gradient": float(np.max(gradients)),
            "worst_theta_index": int(np.unravel_index(np.argmin(increments), increments.shape)[0]),
        }
        report.margins = {"monotonicity": margin}
        report.tolerances = {"monotonicity": tol}
        report.judge()
    return report


def combination_certificate_check(rings: List[RingSolution], weights: List[float],
                                  settings: Optional[LabSettings] = None) -> CheckReport:
    """Combined ring is a subsolution (F >= -sign_tol) and obeys the harmonic-mean gradient identity."""
    settings = settings or LabSettings()
    with CheckReport.timed("subsolution") as report:
        H = combine_solutions(weights, rings)
        params = rings[0].params
        F = plaplacian_residual(H, params)
        band = settings.sign_tol_rel * residual_scale(H, params)
        identity = gradient_harmonic_mean_check(rings, weights, hm_tol=settings.hm_tol)
        taus = [float(np.max(boundary_gradient(r, "inner"))) for r in rings]
        tau_mix = 1.0 / sum(w / t for w, t in zip(weights, taus))
        membership = is_subsolution(H, tau_mix, params, settings.sign_tol_rel, 2.0 * settings.fp_tol)

        report.inputs = {"weights": list(weights), **params.to_dict()}
        report.quantities = {
            "min_residual": float(np.min(F)),
            "harmonic_mean_error": identity.quantities["max_relative_error"],
            "subsolution": membership.to_dict(),
        }
        report.margins = {"sign": float(np.min(F)), "harmonic_mean": identity.margins["harmonic_mean"]}
        report.tolerances = {"sign": band, "harmonic_mean": settings.hm_tol}
        report.judge()
    return report


def flucher_rumpf_probe(omega: BodySpec, p: float, settings: Optional[LabSettings] = None) -> CheckReport:
    """Data only: Lambda(Omega) against the constant of the disk with the same area."""
    settings = settings or LabSettings()
    with CheckReport.timed("flucher-rumpf") as report:
        h = sample_support(omega, settings.grid())
        lam = bernoulli_constant(h, p, settings=settings).lambda_
        radius = math.sqrt(area(h) / math.pi)
        ball = lambda_ball(radius, p, 2)

        report.inputs = {"omega": omega.to_dict(), "p": p}
        report.quantities = {
            "lambda": lam,
            "area": area(h),
            "equal_area_radius": radius,
            "equal_area_ball_lambda": ball,
            "ratio": lam / ball,
        }
        report.informational = True
    return report


def solve_ring_pair(outer: BodySpec, inner: BodySpec, p: float, settings: LabSettings) -> RingSolution:
    """Sample a nested pair and solve its ring."""
    grid = settings.grid()
    return solve_ring(sample_support(outer, grid), sample_support(inner, grid), settings.plaplace(p))
