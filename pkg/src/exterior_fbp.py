"""
Exterior Bernoulli problem.

Given a convex body K and tau > 0, find Omega containing K and the
p-harmonic u with u = 1 on K, u = 0 and |Du| = tau on the boundary of
Omega. Omega is found by a damped trial iteration on its support function.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .convex_geometry import (
    BodySpec,
    SupportFunction,
    homothety_defect,
    inradius_outradius,
    minkowski_combine,
    normalize,
    project_to_convex,
    sample_support,
    translate,
)
from .errors import ConvexityLoss, GridTooCoarse, InvalidBodyError, NewtonDivergence, TrialDivergence
from .harness.base import CheckReport
from .minkowski_comb import tau_harmonic_mean
from .radial import exterior_radius
from .ring_solver import PLaplaceParams, RingSolution, boundary_gradient, solve_ring
from .settings import LabSettings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ExteriorSolution:
    """
    Converged exterior free-boundary solution.

    Attributes:
        h_K: Data body (caller's frame)
        h_Omega: Free domain (caller's frame)
        ring: Ring potential in the Steiner frame of K (offset subtracted)
        tau: Prescribed gradient
        achieved_gradient: |Du| on the free boundary, per direction
        fp_residual: max_j | |Du|_j - tau | / tau
        iterations: Trial iterations spent
        offset: Steiner point of K, i.e. the frame shift of `ring`
        history: fp_residual after each accepted iteration
    """
    h_K: SupportFunction
    h_Omega: SupportFunction
    ring: RingSolution
    tau: float
    achieved_gradient: np.ndarray
    fp_residual: float
    iterations: int
    offset: np.ndarray
    history: List[float] = field(default_factory=list)

    def gradient_rows(self) -> List[Tuple[float, float, float]]:
        """Rows for the theta,grad_outer,grad_inner CSV schema."""
        inner = boundary_gradient(self.ring, "inner")
        return list(zip(self.h_K.theta.tolist(), self.achieved_gradient.tolist(), inner.tolist()))

    def summary(self) -> Dict[str, Any]:
        return {
            "status": "converged",
            "tau": self.tau,
            "fp_residual": self.fp_residual,
            "iterations": self.iterations,
            "h_Omega_min": float(np.min(self.h_Omega.values)),
            "h_Omega_max": float(np.max(self.h_Omega.values)),
            "ring": self.ring.summary(),
            "history": self.history,
        }


def trial_update(h_Omega: SupportFunction, gradient: np.ndarray, tau: float, step: float,
                 tol_convex: float = 1e-9) -> SupportFunction:
    """
    One trial move of the free boundary.

    h' = project_to_convex(h + step * h * (gradient/tau - 1)); the boundary
    moves outward where the gradient exceeds tau.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    gradient = np.asarray(gradient, dtype=float)
    if gradient.shape != h_Omega.values.shape or np.any(gradient <= 0):
        raise ValueError("gradient must be positive with one value per direction")
    values = h_Omega.values + step * h_Omega.values * (gradient / tau - 1.0)
    return project_to_convex(values, h_Omega.grid, tol_convex)


def _fp_residual(gradient: np.ndarray, tau: float) -> float:
    return float(np.max(np.abs(gradient - tau)) / tau)


def solve_exterior(
    h_K: SupportFunction,
    tau: float,
    params: PLaplaceParams,
    fp_tol: Optional[float] = None,
    settings: Optional[LabSettings] = None,
) -> ExteriorSolution:
    """
    Solve the exterior problem for (K, tau).

    Omega starts as K + r0*B with r0 from the annulus over the inball of K.
    A step is rejected and halved when it does not lower the fixed-point
    residual; the run fails once the step drops below the floor or the
    patience window runs out.

    Raises:
        TrialDivergence: residual stopped decreasing
        ConvexityLoss: the initial ring could not be solved
    """
    settings = settings or LabSettings()
    fp_tol = settings.fp_tol if fp_tol is None else fp_tol
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")

    K, offset = normalize(h_K)
    if not K.is_convex(params.tol_convex):
        raise InvalidBodyError("Exterior data body is not discretely convex")
    radii = inradius_outradius(K)
    r0 = exterior_radius(radii.r_in, tau, params.p) - radii.r_in
    omega = K.with_values(K.values + r0)
    logger.info(f"Exterior solve: tau={tau:.6g}, p={params.p}, r_in(K)={radii.r_in:.6g}, r0={r0:.6g}")

    ring = solve_ring(omega, K, params)
    gradient = boundary_gradient(ring, "outer")
    fp = _fp_residual(gradient, tau)
    history = [fp]
    step = settings.step0
    iterations = 0
    stalled = 0

    while fp > fp_tol:
        if iterations >= settings.max_trial or stalled >= settings.patience or step < settings.step_floor:
            raise TrialDivergence(
                "Exterior trial iteration stopped making progress",
                {"fp_residual": fp, "step": step, "iterations": iterations, "history": history[-10:]},
            )
        iterations += 1

        candidate = trial_update(omega, gradient, tau, step, params.tol_convex)
        if np.min(candidate.values - K.values) <= 0:
            logger.debug(f"Trial {iterations}: candidate no longer contains K, halving step")
            step *= 0.5
            stalled += 1
            continue
        try:
            cand_ring = solve_ring(candidate, K, params, warm_start=ring.H)
        except (ConvexityLoss, NewtonDivergence, GridTooCoarse) as e:
            logger.warning(f"Trial {iterations}: ring solve failed ({e.kind}), halving step")
            step *= 0.5
            stalled += 1
            continue

        cand_gradient = boundary_gradient(cand_ring, "outer")
        cand_fp = _fp_residual(cand_gradient, tau)
        if cand_fp >= fp:
            logger.debug(f"Trial {iterations}: residual {cand_fp:.3e} >= {fp:.3e}, halving step")
            step *= 0.5
            stalled += 1
            continue

        omega, ring, gradient, fp = candidate, cand_ring, cand_gradient, cand_fp
        history.append(fp)
        stalled = 0
        logger.debug(f"Trial {iterations}: fp_residual={fp:.3e} step={step:.3g}")

    logger.info(f"Exterior solve converged in {iterations} iterations (fp_residual={fp:.3e})")
    return ExteriorSolution(
        h_K=h_K,
        h_Omega=translate(omega, offset),
        ring=ring,
        tau=tau,
        achieved_gradient=gradient,
        fp_residual=fp,
        iterations=iterations,
        offset=offset,
        history=history,
    )


def exterior_inclusion_check(
    K0: BodySpec,
    K1: BodySpec,
    tau0: float,
    tau1: float,
    lam: float,
    params: PLaplaceParams,
    settings: Optional[LabSettings] = None,
) -> CheckReport:
    """
    (1-lam) Omega(K0, tau0) + lam Omega(K1, tau1) inside Omega(K_lam, tau_lam).

    K_lam is the Minkowski combination of the data and tau_lam the weighted
    harmonic mean. Margin is min_j of the support difference.
    """
    settings = settings or LabSettings()
    with CheckReport.timed("exterior-inclusion") as report:
        grid = params.grid
        hK0 = sample_support(K0, grid)
        hK1 = sample_support(K1, grid)
        hK_lam = minkowski_combine([1.0 - lam, lam], [hK0, hK1])
        tau_lam = tau_harmonic_mean(tau0, tau1, lam)

        sol0 = solve_exterior(hK0, tau0, params, settings=settings)
        sol1 = solve_exterior(hK1, tau1, params, settings=settings)
        sol_lam = solve_exterior(hK_lam, tau_lam, params, settings=settings)

        combo = minkowski_combine([1.0 - lam, lam], [sol0.h_Omega, sol1.h_Omega])
        margin = float(np.min(sol_lam.h_Omega.values - combo.values))
        incl_tol = settings.incl_tol_rel * sol_lam.h_Omega.scale
        defect = homothety_defect(hK0, hK1)

        report.inputs = {
            "K0": K0.to_dict(), "K1": K1.to_dict(),
            "tau0": tau0, "tau1": tau1, "lambda": lam, **params.to_dict(),
        }
        report.quantities = {
            "tau_lambda": tau_lam,
            "fp_residuals": [sol0.fp_residual, sol1.fp_residual, sol_lam.fp_residual],
            "homothety_defect": defect,
            "equality_within_tolerance": abs(margin) <= incl_tol,
            "homothetic_within_tolerance": defect <= settings.uniq_tol_rel,
        }
        report.margins = {"inclusion": margin}
        report.tolerances = {"inclusion": incl_tol}
        report.judge()
    return report
