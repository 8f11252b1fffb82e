"""
Interior Bernoulli problem and the Bernoulli constant.

For a convex Omega and tau > 0 we look for the largest convex K inside
Omega whose ring potential (u = 0 on Omega, u = 1 on K) has |Du| = tau on
the boundary of K. The trial iteration works on the gap d = h_Omega - h_K:

  descent  d <- d * max(g/tau, 1)^s   K only shrinks, accepted while max g drops
  polish   d <- d * (g/tau)^s         two-sided, accepted while the residual drops

Reaching max g <= tau during descent certifies a subsolution, hence
tau >= Lambda(Omega). When max g settles above tau (fold of the gradient
curve, detected by extrapolating the accepted steps) or K degenerates
first, the descent restarts once from the critical disk of the inscribed
annulus and otherwise declares tau infeasible. The Bernoulli constant is
the bisection limit of that feasibility test.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .convex_geometry import (
    SupportFunction,
    ball_support,
    hausdorff_distance,
    inradius_outradius,
    min_width,
    normalize,
    project_to_convex,
    steiner_point,
    translate,
)
from .errors import (
    BracketInversion,
    ConvexityLoss,
    GridTooCoarse,
    GridMismatchError,
    InvalidBodyError,
    NewtonDivergence,
    TrialDivergence,
)
from .harness.base import CheckReport
from .radial import critical_inner_radius
from .ring_solver import (
    PLaplaceParams,
    RingSolution,
    boundary_gradient,
    plaplacian_residual,
    plaplacian_sign,
    residual_scale,
    solve_ring,
)
from .settings import LabSettings

logger = logging.getLogger(__name__)

MAX_EXPONENT = 8.0
INITIALIZATIONS = ("parallel", "scaled")


@dataclass(frozen=True, eq=False)
class InteriorSolution:
    """
    Converged maximal solution of the interior problem.

    Attributes:
        h_Omega: Data domain (caller's frame)
        h_K: Computed largest set (caller's frame)
        ring: Ring potential in the Steiner frame of Omega
        tau: Prescribed gradient
        achieved_gradient: |Du| on the boundary of K, per direction
        fp_residual: max_j | |Du|_j - tau | / tau
        iterations: Trial iterations spent
        offset: Steiner point of Omega (frame shift of `ring`)
        history: Max gradient after each accepted iteration
    """
    h_Omega: SupportFunction
    h_K: SupportFunction
    ring: RingSolution
    tau: float
    achieved_gradient: np.ndarray
    fp_residual: float
    iterations: int
    offset: np.ndarray
    history: List[float] = field(default_factory=list)

    feasible = True

    def gradient_rows(self) -> List[Tuple[float, float, float]]:
        """Rows for the theta,grad_outer,grad_inner CSV schema."""
        outer = boundary_gradient(self.ring, "outer")
        return list(zip(self.h_K.theta.tolist(), outer.tolist(), self.achieved_gradient.tolist()))

    def summary(self) -> Dict[str, Any]:
        return {
            "status": "converged",
            "tau": self.tau,
            "fp_residual": self.fp_residual,
            "iterations": self.iterations,
            "h_K_min": float(np.min(self.h_K.values)),
            "h_K_max": float(np.max(self.h_K.values)),
            "ring": self.ring.summary(),
        }


@dataclass(frozen=True)
class Infeasible:
    """tau is below the Bernoulli constant (no subsolution was reached)."""
    tau: float
    reason: str
    max_gradient: float
    r_in_K: float
    iterations: int

    feasible = False

    def summary(self) -> Dict[str, Any]:
        return {
            "status": "infeasible",
            "tau": self.tau,
            "reason": self.reason,
            "max_gradient": self.max_gradient,
            "r_in_K": self.r_in_K,
            "iterations": self.iterations,
        }


@dataclass(frozen=True, eq=False)
class FeasibilityProbe:
    """
    Outcome of one feasibility test at tau.

    hot_start is the last iterate (Steiner frame of Omega) whose max
    gradient still exceeded tau; it is a valid start for any smaller tau.
    """
    tau: float
    feasible: bool
    reason: str
    max_gradient: float
    iterations: int
    hot_start: Optional[SupportFunction] = None

    def log_entry(self) -> Dict[str, Any]:
        return {
            "tau": self.tau,
            "feasible": self.feasible,
            "reason": self.reason,
            "max_gradient": self.max_gradient,
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class BernoulliConstantResult:
    """
    Bernoulli constant from bisection on feasibility.

    Attributes:
        lambda_: Midpoint of the final bracket
        bracket: (lo, hi) with lo infeasible and hi feasible
        analytic_bracket: Inclusion/min-width bounds before padding
        iterations: Feasibility solves spent
        log: One entry per feasibility solve
        bisect_tol: Relative bracket width requested
        converged: hi - lo <= bisect_tol * lambda_
    """
    lambda_: float
    bracket: Tuple[float, float]
    analytic_bracket: Tuple[float, float]
    iterations: int
    log: List[Dict[str, Any]]
    bisect_tol: float
    converged: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lambda_,
            "bracket": list(self.bracket),
            "analytic_bracket": list(self.analytic_bracket),
            "iterations": self.iterations,
            "bisect_tol": self.bisect_tol,
            "converged": self.converged,
            "log": self.log,
        }


@dataclass(frozen=True)
class SubsolutionReport:
    """Discrete subsolution test: F >= -sign_tol inside and |Du| <= tau on the inner boundary."""
    passed: bool
    sign_ok: bool
    gradient_ok: bool
    min_residual: float
    sign_band: float
    max_inner_gradient: float
    tau: float
    grad_tol: float

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "sign_ok": self.sign_ok,
            "gradient_ok": self.gradient_ok,
            "min_residual": self.min_residual,
            "sign_band": self.sign_band,
            "max_inner_gradient": self.max_inner_gradient,
            "tau": self.tau,
            "grad_tol": self.grad_tol,
        }


# ---------------------------------------------------------------------------
# Closed forms and brackets
# ---------------------------------------------------------------------------

def lambda_ball(R: float, p: float, N: int = 2) -> float:
    """Bernoulli constant of B_R in R^N."""
    if R <= 0 or p <= 1 or N < 2:
        raise ValueError(f"Need R > 0, p > 1, N >= 2; got R={R}, p={p}, N={N}")
    if abs(N - p) < 1e-12:
        return math.e / R
    return ((N - 1) / (p - 1))**((N - 1) / (N - p)) / R


def bracket_details(h_Omega: SupportFunction, p: float) -> Dict[str, float]:
    """Inclusion bounds, min-width bound and the radii they come from."""
    radii = inradius_outradius(h_Omega)
    half_width = min_width(h_Omega) / 2.0
    outer_bound = lambda_ball(radii.R_out, p, 2)
    width_bound = 1.0 / half_width
    return {
        "r_in": radii.r_in,
        "R_out": radii.R_out,
        "min_width": 2.0 * half_width,
        "outer_ball_bound": outer_bound,
        "min_width_bound": width_bound,
        "lo": max(outer_bound, width_bound),
        "hi": lambda_ball(radii.r_in, p, 2),
    }


def lambda_bracket(h_Omega: SupportFunction, p: float) -> Tuple[float, float]:
    """(lo, hi) from B_{r_in} in Omega in B_{R_out}, lo raised to the min-width bound when larger."""
    details = bracket_details(h_Omega, p)
    return details["lo"], details["hi"]


# ---------------------------------------------------------------------------
# Trial iteration
# ---------------------------------------------------------------------------

@dataclass
class _TrialOutcome:
    feasible: bool
    reason: str
    K: SupportFunction
    ring: RingSolution
    gradient: np.ndarray
    iterations: int
    hot: Optional[SupportFunction]
    history: List[float]


def _clamp_below(candidate: SupportFunction, bound: SupportFunction) -> Optional[SupportFunction]:
    """Shrink candidate about its Steiner point until it lies inside bound."""
    if np.all(candidate.values <= bound.values):
        return candidate
    linear = candidate.grid.directions @ steiner_point(candidate)
    num = bound.values - linear
    den = candidate.values - linear
    if np.min(num) <= 0 or np.min(den) <= 0:
        return None
    c = min(1.0, float(np.min(num / den)))
    return candidate.with_values(linear + c * den)


def _start_body(omega: SupportFunction, init: str, settings: LabSettings, r_in: float,
                tol_convex: float) -> SupportFunction:
    if init == "parallel":
        return project_to_convex(omega.values - settings.delta0_rel * r_in, omega.grid, tol_convex)
    if init == "scaled":
        return omega.with_values(0.9 * omega.values)
    raise ValueError(f"Unknown initialization '{init}', expected one of {INITIALIZATIONS}")


def _descent_folded(history: List[float], tau: float, window: int) -> bool:
    """
    Extrapolate the accepted max-gradient sequence to its limit.

    Compares the decrease over the last two windows of accepted steps.
    When the decrease slows down geometrically and the projected limit
    still keeps more than half of the current excess over tau, max g is
    settling on a fold value above tau.
    """
    if len(history) < 2 * window + 1:
        return False
    older = history[-2 * window - 1] - history[-window - 1]
    newer = history[-window - 1] - history[-1]
    if older <= 0 or newer >= older:
        return False
    q = newer / older
    limit = history[-1] - newer * q / (1.0 - q)
    return limit - tau > 0.5 * (history[-1] - tau)


def _inscribed_disk(omega: SupportFunction, params: PLaplaceParams):
    """Ring over the disk that minimises the inner gradient of the inscribed annulus."""
    radii = inradius_outradius(omega)
    rho, _ = critical_inner_radius(radii.r_in, params.p)
    K = ball_support(omega.grid, rho, radii.c_in)
    try:
        ring = solve_ring(omega, K, params)
    except (ConvexityLoss, NewtonDivergence, GridTooCoarse) as e:
        logger.warning(f"Inscribed disk ring failed ({e.kind})")
        return None
    return K, ring, boundary_gradient(ring, "inner")


def _interior_trial(
    omega: SupportFunction,
    tau: float,
    params: PLaplaceParams,
    settings: LabSettings,
    start: SupportFunction,
    r_in_omega: float,
    polish: bool,
) -> _TrialOutcome:
    """Run descent (and optionally polish) in the Steiner frame of omega."""
    r_min = settings.r_min_rel * r_in_omega
    fp_tol = settings.fp_tol
    K = start
    ring = solve_ring(omega, K, params)
    gradient = boundary_gradient(ring, "inner")
    history = [float(np.max(gradient))]
    hot: Optional[SupportFunction] = None
    exponent = 1.0
    iterations = 0
    last_rejection = "fold"
    window = max(2, settings.patience // 2)
    segment = 0
    disk_tried = False

    while np.max(gradient) > tau * (1.0 + fp_tol):
        hot = K
        stop = None
        if exponent < settings.step_floor:
            stop = last_rejection
        elif _descent_folded(history[segment:], tau, window):
            logger.debug(f"Descent {iterations}: max_gradient settles above tau={tau:.8g}")
            stop = "fold"
        elif iterations >= settings.max_trial:
            logger.warning(f"Descent hit the iteration cap at tau={tau:.8g} "
                           f"(max_gradient={np.max(gradient):.8g}), declaring a fold")
            stop = "fold"
        if stop is not None:
            swap = None if disk_tried else _inscribed_disk(omega, params)
            disk_tried = True
            if swap is None or np.max(swap[2]) >= np.max(gradient):
                return _TrialOutcome(False, stop, K, ring, gradient, iterations, hot, history)
            # restart from the inscribed critical disk, which has the lower max gradient
            K, ring, gradient = swap
            history.append(float(np.max(gradient)))
            segment = len(history) - 1
            exponent = 1.0
            last_rejection = "fold"
            continue
        iterations += 1

        gap = omega.values - K.values
        raw = omega.values - gap * np.maximum(gradient / tau, 1.0)**exponent
        candidate = _clamp_below(project_to_convex(raw, omega.grid, params.tol_convex), K)
        if candidate is None:
            exponent *= 0.5
            last_rejection = "fold"
            continue
        if inradius_outradius(candidate).r_in < r_min:
            logger.debug(f"Descent {iterations}: candidate below r_min={r_min:.3g}")
            exponent *= 0.5
            last_rejection = "degenerate"
            continue
        try:
            cand_ring = solve_ring(omega, candidate, params, warm_start=ring.H)
        except (ConvexityLoss, NewtonDivergence, GridTooCoarse) as e:
            logger.warning(f"Descent {iterations}: ring solve failed ({e.kind}), halving exponent")
            exponent *= 0.5
            continue

        cand_gradient = boundary_gradient(cand_ring, "inner")
        if np.max(cand_gradient) < np.max(gradient):
            K, ring, gradient = candidate, cand_ring, cand_gradient
            history.append(float(np.max(gradient)))
            exponent = min(1.5 * exponent, MAX_EXPONENT)
        else:
            exponent *= 0.5
            last_rejection = "fold"
        logger.debug(f"Descent {iterations}: max_gradient={np.max(gradient):.6g} exponent={exponent:.3g}")

    if not polish:
        return _TrialOutcome(True, "subsolution", K, ring, gradient, iterations, hot, history)

    fp = float(np.max(np.abs(gradient - tau)) / tau)
    stalled = 0
    while fp > fp_tol:
        if iterations >= settings.max_trial or stalled >= settings.patience or exponent < settings.step_floor:
            raise TrialDivergence(
                "Interior polishing stopped making progress",
                {"tau": tau, "fp_residual": fp, "exponent": exponent, "iterations": iterations},
            )
        iterations += 1

        gap = omega.values - K.values
        raw = omega.values - gap * (gradient / tau)**exponent
        candidate = project_to_convex(raw, omega.grid, params.tol_convex)
        if np.min(omega.values - candidate.values) <= 0:
            exponent *= 0.5
            stalled += 1
            continue
        try:
            cand_ring = solve_ring(omega, candidate, params, warm_start=ring.H)
        except (ConvexityLoss, NewtonDivergence, GridTooCoarse) as e:
            logger.warning(f"Polish {iterations}: ring solve failed ({e.kind}), halving exponent")
            exponent *= 0.5
            stalled += 1
            continue

        cand_gradient = boundary_gradient(cand_ring, "inner")
        cand_fp = float(np.max(np.abs(cand_gradient - tau)) / tau)
        if cand_fp < fp:
            K, ring, gradient, fp = candidate, cand_ring, cand_gradient, cand_fp
            history.append(float(np.max(gradient)))
            exponent = min(1.5 * exponent, MAX_EXPONENT)
            stalled = 0
        else:
            exponent *= 0.5
            stalled += 1
        logger.debug(f"Polish {iterations}: fp_residual={fp:.3e} exponent={exponent:.3g}")

    return _TrialOutcome(True, "converged", K, ring, gradient, iterations, hot, history)


def _prepare(h_Omega: SupportFunction, tau: float, params: PLaplaceParams):
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if h_Omega.grid != params.grid:
        raise GridMismatchError("Domain must be sampled on the solver grid")
    omega, offset = normalize(h_Omega)
    if not omega.is_convex(params.tol_convex):
        raise InvalidBodyError("Interior domain is not discretely convex")
    return omega, offset, inradius_outradius(omega).r_in


def _checked_start(omega: SupportFunction, warm_start: Optional[SupportFunction]) -> Optional[SupportFunction]:
    if warm_start is None:
        return None
    if warm_start.grid != omega.grid or np.min(omega.values - warm_start.values) <= 0:
        logger.warning("Ignoring warm start that is not strictly inside the domain")
        return None
    return warm_start


def solve_interior(
    h_Omega: SupportFunction,
    tau: float,
    params: PLaplaceParams,
    fp_tol: Optional[float] = None,
    settings: Optional[LabSettings] = None,
    init: str = "parallel",
    warm_start: Optional[SupportFunction] = None,
) -> Union[InteriorSolution, Infeasible]:
    """
    Maximal solution of the interior problem, or Infeasible.

    Args:
        h_Omega: Domain support function
        tau: Prescribed gradient on the free boundary
        params: Ring discretization
        fp_tol: Fixed-point tolerance (defaults to settings.fp_tol)
        settings: Trial-iteration settings
        init: "parallel" (inner parallel body at distance delta0) or "scaled" (0.9 Omega, recentred)
        warm_start: Start body in the Steiner frame of Omega; overrides init

    Returns:
        InteriorSolution on success, Infeasible when tau < Lambda(Omega) is detected
    """
    settings = settings or LabSettings()
    if fp_tol is not None:
        settings = settings.with_overrides(fp_tol=fp_tol)
    omega, offset, r_in = _prepare(h_Omega, tau, params)
    start = _checked_start(omega, warm_start) or _start_body(omega, init, settings, r_in, params.tol_convex)
    logger.info(f"Interior solve: tau={tau:.6g}, p={params.p}, init={init}, r_in(Omega)={r_in:.6g}")

    outcome = _interior_trial(omega, tau, params, settings, start, r_in, polish=True)
    if not outcome.feasible:
        result = Infeasible(
            tau=tau,
            reason=outcome.reason,
            max_gradient=float(np.max(outcome.gradient)),
            r_in_K=inradius_outradius(outcome.K).r_in,
            iterations=outcome.iterations,
        )
        logger.info(f"Interior solve infeasible at tau={tau:.6g} ({result.reason})")
        return result

    fp = float(np.max(np.abs(outcome.gradient - tau)) / tau)
    logger.info(f"Interior solve converged in {outcome.iterations} iterations (fp_residual={fp:.3e})")
    return InteriorSolution(
        h_Omega=h_Omega,
        h_K=translate(outcome.K, offset),
        ring=outcome.ring,
        tau=tau,
        achieved_gradient=outcome.gradient,
        fp_residual=fp,
        iterations=outcome.iterations,
        offset=offset,
        history=outcome.history,
    )


def probe_feasibility(
    h_Omega: SupportFunction,
    tau: float,
    params: PLaplaceParams,
    settings: Optional[LabSettings] = None,
    warm_start: Optional[SupportFunction] = None,
) -> FeasibilityProbe:
    """Descent only: feasible as soon as a discrete subsolution is reached."""
    settings = settings or LabSettings()
    omega, _, r_in = _prepare(h_Omega, tau, params)
    start = _checked_start(omega, warm_start) or _start_body(omega, "parallel", settings, r_in, params.tol_convex)
    outcome = _interior_trial(omega, tau, params, settings, start, r_in, polish=False)
    return FeasibilityProbe(
        tau=tau,
        feasible=outcome.feasible,
        reason=outcome.reason,
        max_gradient=float(np.max(outcome.gradient)),
        iterations=outcome.iterations,
        hot_start=outcome.hot,
    )


def is_subsolution(
    H: np.ndarray,
    tau: float,
    params: PLaplaceParams,
    sign_tol_rel: float = 1e-6,
    grad_tol: float = 2e-6,
) -> SubsolutionReport:
    """
    Discrete membership in the subsolution class at tau.

    Needs F >= -sign_tol at every interior node and
    max |Du| <= tau * (1 + grad_tol) on the inner boundary.
    """
    H = np.asarray(H, dtype=float)
    signs = plaplacian_sign(H, params, sign_tol_rel)
    F = plaplacian_residual(H, params)
    band = sign_tol_rel * residual_scale(H, params)
    ht = (3.0 * H[:, -1] - 4.0 * H[:, -2] + H[:, -3]) / (2.0 * params.dt)
    inner = -1.0 / ht
    sign_ok = bool(np.all(signs >= 0))
    gradient_ok = bool(np.all(ht < 0) and np.max(inner) <= tau * (1.0 + grad_tol))
    return SubsolutionReport(
        passed=sign_ok and gradient_ok,
        sign_ok=sign_ok,
        gradient_ok=gradient_ok,
        min_residual=float(np.min(F)),
        sign_band=band,
        max_inner_gradient=float(np.max(inner)),
        tau=tau,
        grad_tol=grad_tol,
    )


# ---------------------------------------------------------------------------
# Bernoulli constant
# ---------------------------------------------------------------------------

def _check_monotone(log: List[Dict[str, Any]]) -> None:
    feasible = [e["tau"] for e in log if e["feasible"]]
    infeasible = [e["tau"] for e in log if not e["feasible"]]
    if feasible and infeasible and min(feasible) <= max(infeasible):
        raise BracketInversion(
            "Feasibility is not monotone in tau",
            {"min_feasible": min(feasible), "max_infeasible": max(infeasible), "log": log},
        )


def bernoulli_constant(
    h_Omega: SupportFunction,
    p: float,
    bisect_tol: Optional[float] = None,
    params: Optional[PLaplaceParams] = None,
    settings: Optional[LabSettings] = None,
) -> BernoulliConstantResult:
    """
    Lambda(Omega) = inf{tau : a subsolution exists}, by bisection.

    The analytic bracket is padded by settings.bracket_pad on both sides; the
    upper end must be feasible and the lower end infeasible. Each probe
    starts from the hot iterate of the current upper end.

    Raises:
        BracketInversion: the padded bracket does not straddle the constant,
            or feasibility was not monotone across the log
    """
    settings = settings or LabSettings()
    bisect_tol = settings.bisect_tol if bisect_tol is None else bisect_tol
    params = params or settings.plaplace(p)
    if params.p != p:
        raise ValueError(f"Exponent mismatch: p={p} but params.p={params.p}")

    omega, _ = normalize(h_Omega)
    lo_a, hi_a = lambda_bracket(omega, p)
    lo, hi = lo_a / settings.bracket_pad, hi_a * settings.bracket_pad
    logger.info(f"Bernoulli constant: p={p}, analytic bracket [{lo_a:.6g}, {hi_a:.6g}]")

    log: List[Dict[str, Any]] = []
    top = probe_feasibility(omega, hi, params, settings)
    log.append(top.log_entry())
    if not top.feasible:
        raise BracketInversion("Upper end of the bracket is infeasible",
                               {"hi": hi, "max_gradient": top.max_gradient, "log": log})
    warm = top.hot_start

    bottom = probe_feasibility(omega, lo, params, settings, warm_start=warm)
    log.append(bottom.log_entry())
    if bottom.feasible:
        raise BracketInversion("Lower end of the bracket is feasible",
                               {"lo": lo, "max_gradient": bottom.max_gradient, "log": log})

    iterations = 2
    while hi - lo > bisect_tol * 0.5 * (lo + hi):
        if iterations >= settings.max_bisect:
            logger.warning(f"Bisection stopped after {iterations} feasibility solves")
            break
        mid = 0.5 * (lo + hi)
        probe = probe_feasibility(omega, mid, params, settings, warm_start=warm)
        log.append(probe.log_entry())
        iterations += 1
        if probe.feasible:
            hi = mid
            if probe.hot_start is not None:
                warm = probe.hot_start
        else:
            lo = mid
        logger.info(f"Bisection {iterations}: tau={mid:.8g} feasible={probe.feasible} -> [{lo:.8g}, {hi:.8g}]")

    _check_monotone(log)
    lam = 0.5 * (lo + hi)
    return BernoulliConstantResult(
        lambda_=lam,
        bracket=(lo, hi),
        analytic_bracket=(lo_a, hi_a),
        iterations=iterations,
        log=log,
        bisect_tol=bisect_tol,
        converged=hi - lo <= bisect_tol * lam,
    )


def uniqueness_probe(
    h_Omega: SupportFunction,
    p: float,
    params: Optional[PLaplaceParams] = None,
    settings: Optional[LabSettings] = None,
    constant: Optional[BernoulliConstantResult] = None,
) -> CheckReport:
    """
    Solve at the computed constant from two different starts and compare.

    tau is the upper end of the final bisection bracket (the smallest
    tested tau known to be feasible). Pass iff the two largest sets agree
    within uniq_tol in Hausdorff distance.
    """
    settings = settings or LabSettings()
    params = params or settings.plaplace(p)
    with CheckReport.timed("uniqueness") as report:
        constant = constant or bernoulli_constant(h_Omega, p, params=params, settings=settings)
        tau = constant.bracket[1]
        runs = {init: solve_interior(h_Omega, tau, params, settings=settings, init=init)
                for init in INITIALIZATIONS}

        uniq_tol = settings.uniq_tol_rel * normalize(h_Omega)[0].scale
        report.inputs = {"p": p, **params.to_dict()}
        report.tolerances = {"uniqueness": uniq_tol}
        report.quantities = {
            "lambda": constant.lambda_,
            "tau": tau,
            "runs": {init: run.summary() for init, run in runs.items()},
        }
        if all(run.feasible for run in runs.values()):
            distance = hausdorff_distance(runs["parallel"].h_K, runs["scaled"].h_K)
            report.quantities["hausdorff_distance"] = distance
            report.margins = {"uniqueness": -distance}
            report.judge()
        else:
            report.margins = {"uniqueness": -math.inf}
            report.passed = False
    return report
