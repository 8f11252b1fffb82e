"""
p-harmonic potential of a convex ring in support-function coordinates.

The ring between an outer body Omega (u = 0) and an inner body K (u = 1) is
represented by H[j, k] = h(theta_j, t_k), the support function of the level
set {u >= t_k}, t_k = k/L. Row t = 0 is Omega and row t = 1 is K. In these
coordinates Delta_p u = 0 becomes, after clearing the curvature denominator,

    F = (p-1) h_tt (h + h_thetatheta) - h_t^2 - (p-1) h_ttheta^2 = 0

at interior nodes, and |Du| = -1/h_t on every level curve. F >= 0 means
Delta_p u >= 0 (subsolution side).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import spsolve

from .convex_geometry import (
    DirectionGrid,
    SupportFunction,
    curvature_radius,
    is_discretely_convex,
    mean_width,
    theta_derivative,
)
from .errors import ConvexityLoss, GridMismatchError, GridTooCoarse, InvalidBodyError, NewtonDivergence
from .radial import level_radius

logger = logging.getLogger(__name__)

MIN_P = 1.1
MIN_STEP = 2.0**-20


@dataclass(frozen=True)
class PLaplaceParams:
    """
    Discretization of one ring problem.

    Attributes:
        p: Exponent of the p-Laplacian (p >= 1.1)
        grid: Angular grid
        L: Number of t-intervals, t_k = k/L
        newton_tol: Residual tolerance relative to max(1, max h_t^2)
        max_newton: Newton iteration cap
        damping: Initial step factor, halved on rejection
        delta_curv_rel: Smallest admissible radius of curvature, relative to body scale
        tol_convex: Slice convexity tolerance used by the final checks
    """
    p: float
    grid: DirectionGrid
    L: int = 128
    newton_tol: float = 1e-8
    max_newton: int = 50
    damping: float = 1.0
    delta_curv_rel: float = 1e-6
    tol_convex: float = 1e-9

    def __post_init__(self):
        if not self.p >= MIN_P:
            raise ValueError(f"p must be >= {MIN_P}, got {self.p}")
        if int(self.L) != self.L or self.L < 16:
            raise ValueError(f"L must be an integer >= 16, got {self.L}")
        if self.newton_tol <= 0:
            raise ValueError(f"newton_tol must be positive, got {self.newton_tol}")
        if not 0 < self.damping <= 1:
            raise ValueError(f"damping must be in (0, 1], got {self.damping}")
        if self.max_newton < 1:
            raise ValueError(f"max_newton must be >= 1, got {self.max_newton}")

    @property
    def dt(self) -> float:
        return 1.0 / self.L

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.L + 1) / self.L

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "M": self.grid.M,
            "L": self.L,
            "newton_tol": self.newton_tol,
            "max_newton": self.max_newton,
            "damping": self.damping,
        }


@dataclass(frozen=True, eq=False)
class RingSolution:
    """
    Converged ring potential.

    Attributes:
        params: Discretization used
        H: h(theta_j, t_k), shape (M, L+1); H[:, 0] = h_Omega, H[:, L] = h_K
        residual_norm: max |F| over interior nodes
        iterations: Newton iterations spent
    """
    params: PLaplaceParams
    H: np.ndarray
    residual_norm: float
    iterations: int = 0

    def __post_init__(self):
        H = np.array(self.H, dtype=float)
        H.setflags(write=False)
        object.__setattr__(self, "H", H)

    @property
    def grid(self) -> DirectionGrid:
        return self.params.grid

    @property
    def h_outer(self) -> SupportFunction:
        return SupportFunction(self.grid, self.H[:, 0])

    @property
    def h_inner(self) -> SupportFunction:
        return SupportFunction(self.grid, self.H[:, -1])

    def to_rows(self) -> List[Tuple[float, float, float]]:
        """Rows for the theta,t,h CSV schema."""
        return matrix_rows(self.H, self.params)

    def summary(self) -> Dict[str, Any]:
        return {
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            **self.params.to_dict(),
        }


def matrix_rows(H: np.ndarray, params: PLaplaceParams) -> List[Tuple[float, float, float]]:
    theta = params.grid.theta
    t = params.t
    return [(float(theta[j]), float(t[k]), float(H[j, k]))
            for j in range(H.shape[0]) for k in range(H.shape[1])]


# ---------------------------------------------------------------------------
# Residual and Jacobian
# ---------------------------------------------------------------------------

def _check_shape(H: np.ndarray, params: PLaplaceParams) -> np.ndarray:
    H = np.asarray(H, dtype=float)
    expected = (params.grid.M, params.L + 1)
    if H.shape != expected:
        raise GridMismatchError(
            f"Ring matrix has shape {H.shape}, expected {expected}",
            {"shape": list(H.shape), "expected": list(expected)},
        )
    return H


def _stencil_terms(H: np.ndarray, params: PLaplaceParams):
    """h_t, h_tt, h_ttheta and radius of curvature at interior nodes, each (M, L-1)."""
    dt = params.dt
    dth = params.grid.dtheta
    up, mid, down = H[:, 2:], H[:, 1:-1], H[:, :-2]
    ht = (up - down) / (2.0 * dt)
    htt = (up - 2.0 * mid + down) / dt**2
    htth = (np.roll(up, -1, axis=0) - np.roll(down, -1, axis=0)
            - np.roll(up, 1, axis=0) + np.roll(down, 1, axis=0)) / (4.0 * dt * dth)
    rho = curvature_radius(mid, dth)
    return ht, htt, htth, rho


def plaplacian_residual(H: np.ndarray, params: PLaplaceParams) -> np.ndarray:
    """F at interior nodes, shape (M, L-1)."""
    H = _check_shape(H, params)
    a = params.p - 1.0
    ht, htt, htth, rho = _stencil_terms(H, params)
    return a * htt * rho - ht**2 - a * htth**2


def residual_scale(H: np.ndarray, params: PLaplaceParams) -> float:
    """max(1, max h_t^2) over interior nodes."""
    ht = (H[:, 2:] - H[:, :-2]) / (2.0 * params.dt)
    return max(1.0, float(np.max(ht**2)))


def _jacobian(H: np.ndarray, params: PLaplaceParams):
    M, L = params.grid.M, params.L
    n = L - 1
    dt, dth = params.dt, params.grid.dtheta
    a = params.p - 1.0
    ht, htt, htth, rho = _stencil_terms(H, params)

    cross = a * htth / (2.0 * dt * dth)
    entries = [
        (0, 0, -2.0 * a * rho / dt**2 + a * htt * (1.0 - 2.0 / dth**2)),
        (0, 1, a * rho / dt**2 - ht / dt),
        (0, -1, a * rho / dt**2 + ht / dt),
        (1, 0, a * htt / dth**2),
        (-1, 0, a * htt / dth**2),
        (1, 1, -cross),
        (-1, -1, -cross),
        (1, -1, cross),
        (-1, 1, cross),
    ]

    j = np.arange(M)[:, None]
    k = np.arange(1, L)[None, :]
    row = np.broadcast_to(j * n + (k - 1), (M, n))
    rows, cols, vals = [], [], []
    for dj, dk, coef in entries:
        kk = k + dk
        mask = np.broadcast_to((kk >= 1) & (kk <= n), (M, n))
        col = np.broadcast_to(((j + dj) % M) * n + (kk - 1), (M, n))
        rows.append(row[mask])
        cols.append(col[mask])
        vals.append(np.broadcast_to(coef, (M, n))[mask])

    size = M * n
    return coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    ).tocsc()


# ---------------------------------------------------------------------------
# Newton solve
# ---------------------------------------------------------------------------

def initial_guess(h_outer: SupportFunction, h_inner: SupportFunction, params: PLaplaceParams) -> np.ndarray:
    """
    Levelwise Minkowski interpolation (1 - s(t)) h_Omega + s(t) h_K.

    s(t) follows the annulus level radii of the equivalent disks (radius b/2),
    so concentric disks start from the exact radial profile.
    """
    R_eq = mean_width(h_outer) / 2.0
    r_eq = mean_width(h_inner) / 2.0
    radii = level_radius(params.t, R_eq, r_eq, params.p)
    s = (R_eq - radii) / (R_eq - r_eq)
    H = (1.0 - s)[None, :] * h_outer.values[:, None] + s[None, :] * h_inner.values[:, None]
    H[:, 0] = h_outer.values
    H[:, -1] = h_inner.values
    return H


def _shift_warm_start(warm: np.ndarray, h_outer: SupportFunction, h_inner: SupportFunction,
                      params: PLaplaceParams) -> np.ndarray:
    t = params.t
    H = (warm
         + (1.0 - t)[None, :] * (h_outer.values - warm[:, 0])[:, None]
         + t[None, :] * (h_inner.values - warm[:, -1])[:, None])
    H[:, 0] = h_outer.values
    H[:, -1] = h_inner.values
    return H


def _inadmissibility(H: np.ndarray, params: PLaplaceParams, delta_curv: float) -> Optional[str]:
    """None if H is an admissible iterate, else the reason it is not."""
    if not np.all(np.isfinite(H)):
        return "non-finite"
    if np.min(curvature_radius(H[:, 1:-1], params.grid.dtheta)) < delta_curv:
        return "curvature"
    if np.max(np.diff(H, axis=1)) >= 0:
        return "monotonicity"
    return None


def solve_ring(
    h_outer: SupportFunction,
    h_inner: SupportFunction,
    params: PLaplaceParams,
    warm_start: Optional[np.ndarray] = None,
) -> RingSolution:
    """
    Solve the ring Dirichlet problem by damped Newton.

    Args:
        h_outer: Support of Omega (level t = 0)
        h_inner: Support of K (level t = 1), strictly inside Omega
        params: Discretization
        warm_start: Optional previous H; its boundary rows are blended onto the new data

    Returns:
        Converged RingSolution

    Raises:
        NewtonDivergence: residual stagnated or iteration cap reached
        ConvexityLoss: iterate slices lost positive curvature at maximal damping
        GridTooCoarse: converged matrix is not monotone in t / slices not convex
    """
    if h_outer.grid != params.grid or h_inner.grid != params.grid:
        raise GridMismatchError("Ring boundary data must live on the solver grid",
                                {"M": [h_outer.grid.M, h_inner.grid.M, params.grid.M]})
    gap = h_outer.values - h_inner.values
    if np.min(gap) <= 0:
        raise InvalidBodyError(
            "Inner body must lie strictly inside the outer body",
            {"min_gap": float(np.min(gap)), "direction_index": int(np.argmin(gap))},
        )

    delta_curv = params.delta_curv_rel * h_outer.scale
    H = None
    if warm_start is not None:
        warm_start = np.asarray(warm_start, dtype=float)
        if warm_start.shape == (params.grid.M, params.L + 1):
            H = _shift_warm_start(warm_start, h_outer, h_inner, params)
            if _inadmissibility(H, params, delta_curv) is not None:
                logger.debug("Warm start not admissible, using default initial guess")
                H = None
        else:
            logger.warning(f"Ignoring warm start of shape {warm_start.shape}")
    if H is None:
        H = initial_guess(h_outer, h_inner, params)
        reason = _inadmissibility(H, params, delta_curv)
        if reason is not None:
            raise ConvexityLoss(
                f"Initial ring guess is not admissible ({reason})",
                {"min_curvature_radius": float(np.min(curvature_radius(H[:, 1:-1], params.grid.dtheta))),
                 "delta_curv": delta_curv},
            )

    M, n = params.grid.M, params.L - 1
    F = plaplacian_residual(H, params)
    residual = float(np.max(np.abs(F)))
    iterations = 0

    while residual > params.newton_tol * residual_scale(H, params):
        if iterations >= params.max_newton:
            raise NewtonDivergence(
                f"Newton did not converge in {params.max_newton} iterations",
                {"residual": residual, "tolerance": params.newton_tol * residual_scale(H, params)},
            )
        J = _jacobian(H, params)
        delta = spsolve(J, -F.ravel())
        if not np.all(np.isfinite(delta)):
            raise NewtonDivergence("Singular Newton system", {"iteration": iterations, "residual": residual})
        delta = delta.reshape(M, n)

        merit = float(np.linalg.norm(F))
        step = params.damping
        rejection = "merit"
        while step >= MIN_STEP:
            trial = H.copy()
            trial[:, 1:-1] += step * delta
            reason = _inadmissibility(trial, params, delta_curv)
            if reason is None:
                F_trial = plaplacian_residual(trial, params)
                if float(np.linalg.norm(F_trial)) < merit:
                    break
                rejection = "merit"
            else:
                rejection = reason
            step *= 0.5
        else:
            context = {"iteration": iterations, "residual": residual, "reason": rejection}
            if rejection == "merit":
                raise NewtonDivergence("Newton residual stagnated", context)
            raise ConvexityLoss(f"Newton iterate not admissible at maximal damping ({rejection})", context)

        H, F = trial, F_trial
        residual = float(np.max(np.abs(F)))
        iterations += 1
        logger.debug(f"Newton {iterations}: step={step:.3g} residual={residual:.3e}")

    _check_converged_shape(H, params)
    return RingSolution(params=params, H=H, residual_norm=residual, iterations=iterations)


def _check_converged_shape(H: np.ndarray, params: PLaplaceParams) -> None:
    steps = np.diff(H, axis=1)
    if np.max(steps) >= 0:
        j, k = np.unravel_index(np.argmax(steps), steps.shape)
        raise GridTooCoarse("Converged ring is not strictly decreasing in t",
                            {"theta_index": int(j), "t_index": int(k)})
    for k in range(H.shape[1]):
        if not is_discretely_convex(H[:, k], params.grid.dtheta, params.tol_convex):
            raise GridTooCoarse(f"Level slice {k} is not discretely convex", {"t_index": k})
    ht = np.gradient(H, params.dt, axis=1, edge_order=2)
    if np.max(ht[:, [0, -1]]) >= 0:
        raise GridTooCoarse("One-sided boundary derivative is not negative; refine L",
                            {"L": params.L})


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------

def gradient_field(H: np.ndarray, params: PLaplaceParams) -> np.ndarray:
    """|Du| = -1/h_t at every node; centered inside, one-sided second order at t = 0, 1."""
    H = _check_shape(H, params)
    return -1.0 / np.gradient(H, params.dt, axis=1, edge_order=2)


def boundary_gradient(sol: RingSolution, side: str) -> np.ndarray:
    """|Du| per direction on the outer (t = 0) or inner (t = 1) boundary."""
    if side not in ("outer", "inner"):
        raise ValueError(f"side must be 'outer' or 'inner', got {side!r}")
    H = sol.H
    dt = sol.params.dt
    if side == "outer":
        ht = (-3.0 * H[:, 0] + 4.0 * H[:, 1] - H[:, 2]) / (2.0 * dt)
    else:
        ht = (3.0 * H[:, -1] - 4.0 * H[:, -2] + H[:, -3]) / (2.0 * dt)
    return -1.0 / ht


def boundary_point(sol: RingSolution, j: int, k: int) -> np.ndarray:
    """Point of level curve t_k with outer normal theta_j: h*theta + h_theta*theta^perp."""
    column = sol.H[:, k]
    h = column[j]
    h_theta = theta_derivative(column, sol.grid.dtheta)[j]
    return h * sol.grid.directions[j] + h_theta * sol.grid.tangents[j]


def plaplacian_sign(H: np.ndarray, params: PLaplaceParams, sign_tol_rel: float = 1e-6) -> np.ndarray:
    """
    Sign of F at interior nodes with a +-sign_tol band (0 inside the band).

    The band is sign_tol_rel * max(1, max h_t^2).
    """
    H = _check_shape(H, params)
    rho = curvature_radius(H[:, 1:-1], params.grid.dtheta)
    delta_curv = params.delta_curv_rel * float(np.max(np.abs(H[:, 0])))
    if np.min(rho) <= delta_curv:
        raise ConvexityLoss("Level slice with non-positive radius of curvature",
                            {"min_curvature_radius": float(np.min(rho)), "delta_curv": delta_curv})
    band = sign_tol_rel * residual_scale(H, params)
    F = plaplacian_residual(H, params)
    return np.where(F > band, 1, np.where(F < -band, -1, 0))
