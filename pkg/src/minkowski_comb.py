"""Levelwise Minkowski combination of ring solutions."""

import logging
from typing import Sequence

import numpy as np

from .convex_geometry import is_discretely_convex, validate_weights
from .errors import GridMismatchError
from .harness.base import CheckReport
from .ring_solver import RingSolution, gradient_field

logger = logging.getLogger(__name__)


def tau_harmonic_mean(tau0: float, tau1: float, lam: float) -> float:
    """((1 - lam)/tau0 + lam/tau1)^-1."""
    if tau0 <= 0 or tau1 <= 0:
        raise ValueError(f"tau values must be positive, got {tau0}, {tau1}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    return 1.0 / ((1.0 - lam) / tau0 + lam / tau1)


def _check_compatible(sols: Sequence[RingSolution]) -> None:
    first = sols[0].params
    for sol in sols[1:]:
        other = sol.params
        if other.grid != first.grid or other.L != first.L or other.p != first.p:
            raise GridMismatchError(
                "Ring solutions must share grid, L and p",
                {"M": [s.params.grid.M for s in sols],
                 "L": [s.params.L for s in sols],
                 "p": [s.params.p for s in sols]},
            )


def combine_solutions(weights: Sequence[float], sols: Sequence[RingSolution]) -> np.ndarray:
    """
    H_lambda = sum_i weights[i] * H_i, level index by level index.

    The result keeps monotonicity in t and convex slices; it is a
    subsolution candidate, not a solution.
    """
    if len(weights) != len(sols) or not sols:
        raise ValueError(f"Need one weight per solution, got {len(weights)} and {len(sols)}")
    weights = [float(w) for w in weights]
    validate_weights(weights)
    _check_compatible(sols)
    H = np.tensordot(weights, np.stack([s.H for s in sols]), axes=1)

    params = sols[0].params
    if np.max(np.diff(H, axis=1)) >= 0 or not all(
        is_discretely_convex(H[:, k], params.grid.dtheta, params.tol_convex) for k in range(H.shape[1])
    ):
        logger.warning("Combined ring lost monotonicity or slice convexity")
    return H


def gradient_harmonic_mean_check(
    sols: Sequence[RingSolution],
    weights: Sequence[float],
    hm_tol: float = 1e-6,
) -> CheckReport:
    """
    Compare |Du_lambda| = -1/d_t H_lambda with the weighted harmonic mean of -1/d_t H_i.

    Matched normals make the two agree to round-off.
    """
    with CheckReport.timed("gradient-harmonic-mean") as report:
        H = combine_solutions(weights, sols)
        params = sols[0].params
        combined = gradient_field(H, params)
        reciprocal = sum(w / gradient_field(s.H, params) for w, s in zip(weights, sols))
        expected = 1.0 / reciprocal
        error = float(np.max(np.abs(combined - expected) / expected))

        report.inputs = {"weights": list(weights), "p": params.p, "M": params.grid.M, "L": params.L}
        report.quantities = {"max_relative_error": error}
        report.margins = {"harmonic_mean": -error}
        report.tolerances = {"harmonic_mean": hm_tol}
        report.judge()
    return report
