"""
Sampled support functions of planar convex bodies.

A convex body K is stored through its support function
h_K(theta) = sup <x, (cos theta, sin theta)> sampled on a uniform grid of M
directions. Minkowski combinations are pointwise weighted sums of samples,
so most of the calculus here is plain numpy arithmetic.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateBodyError, GridMismatchError, InvalidBodyError, OptimizationError

logger = logging.getLogger(__name__)

DEFAULT_TOL_CONVEX = 1e-9
DEFAULT_ROUNDING = 0.05  # polygon rounding radius, relative to circumradius
DEGENERATE_REL = 1e-9


# ---------------------------------------------------------------------------
# Grid and sampled support functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectionGrid:
    """
    Uniform grid of directions theta_j = 2*pi*j/M.

    M must be even so that antipodal directions are on the grid.
    """
    M: int

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 16 or self.M % 2:
            raise ValueError(f"Direction grid needs an even M >= 16, got {self.M}")

    @property
    def dtheta(self) -> float:
        return 2.0 * math.pi / self.M

    @property
    def theta(self) -> np.ndarray:
        return np.arange(self.M) * self.dtheta

    @property
    def directions(self) -> np.ndarray:
        """Unit normals, shape (M, 2)."""
        theta = self.theta
        return np.column_stack([np.cos(theta), np.sin(theta)])

    @property
    def tangents(self) -> np.ndarray:
        """Unit tangents (normals rotated by +pi/2), shape (M, 2)."""
        theta = self.theta
        return np.column_stack([-np.sin(theta), np.cos(theta)])


def theta_derivative(values: np.ndarray, dtheta: float) -> np.ndarray:
    """Centered periodic difference along axis 0."""
    return (np.roll(values, -1, axis=0) - np.roll(values, 1, axis=0)) / (2.0 * dtheta)


def curvature_radius(values: np.ndarray, dtheta: float) -> np.ndarray:
    """Discrete radius of curvature h + h_thetatheta along axis 0."""
    second = (np.roll(values, -1, axis=0) - 2.0 * values + np.roll(values, 1, axis=0)) / dtheta**2
    return values + second


def is_discretely_convex(values: np.ndarray, dtheta: float, tol: float = DEFAULT_TOL_CONVEX) -> bool:
    """True when every sampled radius of curvature is >= -tol * scale."""
    values = np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return bool(np.min(curvature_radius(values, dtheta)) >= -tol * max(scale, 1e-300))


@dataclass(frozen=True, eq=False)
class SupportFunction:
    """
    Support function of a planar convex body sampled on a DirectionGrid.

    Attributes:
        grid: Direction grid the samples live on
        values: h_j, one per direction (read-only array, length units)
    """
    grid: DirectionGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.M,):
            raise GridMismatchError(
                f"Expected {self.grid.M} support samples, got shape {values.shape}",
                {"M": self.grid.M, "shape": list(values.shape)},
            )
        if not np.all(np.isfinite(values)):
            raise InvalidBodyError("Support samples must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def theta(self) -> np.ndarray:
        return self.grid.theta

    @property
    def scale(self) -> float:
        """Body scale used for relative tolerances."""
        return float(np.max(np.abs(self.values)))

    def derivative(self) -> np.ndarray:
        return theta_derivative(self.values, self.grid.dtheta)

    def radius_of_curvature(self) -> np.ndarray:
        return curvature_radius(self.values, self.grid.dtheta)

    def is_convex(self, tol: float = DEFAULT_TOL_CONVEX) -> bool:
        return is_discretely_convex(self.values, self.grid.dtheta, tol)

    def boundary_points(self) -> np.ndarray:
        """Points x_j = h_j*theta_j + h'_j*theta_j^perp, shape (M, 2)."""
        return (self.values[:, None] * self.grid.directions
                + self.derivative()[:, None] * self.grid.tangents)

    def with_values(self, values: np.ndarray) -> "SupportFunction":
        return SupportFunction(self.grid, values)

    def to_rows(self) -> List[Tuple[float, float]]:
        """Rows for the theta,h CSV schema."""
        return list(zip(self.theta.tolist(), self.values.tolist()))


def _check_same_grid(*bodies: SupportFunction) -> DirectionGrid:
    grid = bodies[0].grid
    for body in bodies[1:]:
        if body.grid != grid:
            raise GridMismatchError(
                f"Support functions live on different grids (M={grid.M} vs M={body.grid.M})",
                {"M": [b.grid.M for b in bodies]},
            )
    return grid


# ---------------------------------------------------------------------------
# Body specifications
# ---------------------------------------------------------------------------

class BodySpec(ABC):
    """A convex body description that can evaluate its support function exactly."""

    tag: str = ""

    @abstractmethod
    def support(self, theta: np.ndarray) -> np.ndarray:
        """Support function at arbitrary angles."""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON form, {tag: {params}}."""
        pass

    def scaled(self, alpha: float) -> "BodySpec":
        return Scaled(alpha, self)

    def rotated(self, phi: float) -> "BodySpec":
        return Rotated(phi, self)

    def translated(self, v: Sequence[float]) -> "BodySpec":
        return Translated((float(v[0]), float(v[1])), self)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise InvalidBodyError(f"{name} must be positive, got {value}", {name: value})
    return value


@dataclass(frozen=True)
class Disk(BodySpec):
    R: float
    tag = "disk"

    def __post_init__(self):
        _positive("R", self.R)

    def support(self, theta: np.ndarray) -> np.ndarray:
        return np.full(np.shape(theta), float(self.R))

    def to_dict(self) -> Dict[str, Any]:
        return {self.tag: {"R": self.R}}


@dataclass(frozen=True)
class Ellipse(BodySpec):
    a: float
    b: float
    tag = "ellipse"

    def __post_init__(self):
        _positive("a", self.a)
        _positive("b", self.b)

    def support(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return np.sqrt((self.a * np.cos(theta))**2 + (self.b * np.sin(theta))**2)

    def to_dict(self) -> Dict[str, Any]:
        return {self.tag: {"a": self.a, "b": self.b}}


@dataclass(frozen=True)
class RegularNgon(BodySpec):
    """
    Regular polygon rounded by an eps-ball (Minkowski sum with B_eps).

    Vertices sit at angles (2k+1)*pi/n, so the square has axis-parallel sides.
    eps defaults to 0.05 * circumradius.
    """
    n: int
    circumradius: float
    eps: Optional[float] = None
    tag = "regular_ngon"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise InvalidBodyError(f"regular_ngon needs n >= 3, got {self.n}", {"n": self.n})
        _positive("circumradius", self.circumradius)
        if self.eps is None:
            object.__setattr__(self, "eps", DEFAULT_ROUNDING * float(self.circumradius))
        _positive("eps", self.eps)

    def vertices(self) -> np.ndarray:
        angles = (2 * np.arange(self.n) + 1) * math.pi / self.n
        return self.circumradius * np.column_stack([np.cos(angles), np.sin(angles)])

    def support(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return np.max(dirs @ self.vertices().T, axis=-1) + self.eps

    def to_dict(self) -> Dict[str, Any]:
        return {self.tag: {"n": self.n, "circumradius": self.circumradius, "eps": self.eps}}


@dataclass(frozen=True)
class MinkowskiCombo(BodySpec):
    """Sum of weight_i * body_i with nonnegative weights summing to 1."""
    terms: Tuple[Tuple[float, BodySpec], ...]
    tag = "minkowski_combo"

    def __post_init__(self):
        terms = tuple((float(w), body) for w, body in self.terms)
        if not terms:
            raise InvalidBodyError("minkowski_combo needs at least one term")
        weights = [w for w, _ in terms]
        validate_weights(weights)
        object.__setattr__(self, "terms", terms)

    def support(self, theta: np.ndarray) -> np.ndarray:
        total = np.zeros(np.shape(theta))
        for weight, body in self.terms:
            total = total + weight * body.support(theta)
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {self.tag: [{"weight": w, "body": body.to_dict()} for w, body in self.terms]}


@dataclass(frozen=True)
class Scaled(BodySpec):
    alpha: float
    body: BodySpec
    tag = "scaled"

    def __post_init__(self):
        _positive("alpha", self.alpha)

    def support(self, theta: np.ndarray) -> np.ndarray:
        return self.alpha * self.body.support(theta)

    def to_dict(self) -> Dict[str, Any]:
        return {self.tag: {"alpha": self.alpha, "body": self.body.to_dict()}}


@dataclass(frozen=True)
class Rotated(BodySpec):
    """Rotation by phi about the origin."""
    phi: float
    body: BodySpec
    tag = "rotated"

    def __post_init__(self):
        if not math.isfinite(float(self.phi)):
            raise InvalidBodyError(f"Rotation angle must be finite, got {self.phi}")

    def support(self, theta: np.ndarray) -> np.ndarray:
        return self.body.support(np.asarray(theta, dtype=float) - self.phi)

    def to_dict(self) -> Dict[str, Any]:
        return {self.tag: {"phi": self.phi, "body": self.body.to_dict()}}


@dataclass(frozen=True)
class Translated(BodySpec):
    v: Tuple[float, float]
    body: BodySpec
    tag = "translated"

    def __post_init__(self):
        v = tuple(float(x) for x in self.v)
        if len(v) != 2 or not all(math.isfinite(x) for x in v):
            raise InvalidBodyError(f"Translation must be a finite 2-vector, got {self.v}")
        object.__setattr__(self, "v", v)

    def support(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return self.body.support(theta) + self.v[0] * np.cos(theta) + self.v[1] * np.sin(theta)

    def to_dict(self) -> Dict[str, Any]:
        return {self.tag: {"v": list(self.v), "body": self.body.to_dict()}}


def validate_weights(weights: Sequence[float]) -> None:
    if any((not math.isfinite(w)) or w < 0 for w in weights):
        raise InvalidBodyError(f"Weights must be nonnegative, got {list(weights)}")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise InvalidBodyError(f"Weights must sum to 1, got {sum(weights)}", {"weights": list(weights)})


def parse_body_spec(doc: Dict[str, Any]) -> BodySpec:
    """
    Build a BodySpec from its JSON form.

    Examples:
        {"disk": {"R": 1}}
        {"ellipse": {"a": 2, "b": 1}}
        {"regular_ngon": {"n": 4, "circumradius": 1, "eps": 0.05}}
        {"minkowski_combo": [{"weight": 0.5, "body": {...}}, ...]}
        {"scaled": {"alpha": 2, "body": {...}}}
        {"rotated": {"phi": 0.3, "body": {...}}}
        {"translated": {"v": [1, 0], "body": {...}}}
    """
    if isinstance(doc, BodySpec):
        return doc
    if not isinstance(doc, dict) or len(doc) != 1:
        raise InvalidBodyError(f"Body spec must be a single-key object, got {doc!r}")

    tag, params = next(iter(doc.items()))
    try:
        if tag == "disk":
            return Disk(R=params["R"])
        if tag == "ellipse":
            return Ellipse(a=params["a"], b=params["b"])
        if tag == "regular_ngon":
            return RegularNgon(n=int(params["n"]), circumradius=params["circumradius"], eps=params.get("eps"))
        if tag == "minkowski_combo":
            return MinkowskiCombo(tuple((t["weight"], parse_body_spec(t["body"])) for t in params))
        if tag == "scaled":
            return Scaled(params["alpha"], parse_body_spec(params["body"]))
        if tag == "rotated":
            return Rotated(params["phi"], parse_body_spec(params["body"]))
        if tag == "translated":
            return Translated(tuple(params["v"]), parse_body_spec(params["body"]))
    except (KeyError, TypeError) as e:
        raise InvalidBodyError(f"Malformed '{tag}' body spec: {e}", {"spec": doc})

    raise InvalidBodyError(f"Unknown body tag '{tag}'", {"spec": doc})


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def sample_support(spec: BodySpec, grid: DirectionGrid) -> SupportFunction:
    """Sample a body's support function on the grid (polygons come pre-rounded)."""
    return SupportFunction(grid, spec.support(grid.theta))


def minkowski_combine(weights: Sequence[float], bodies: Sequence[SupportFunction]) -> SupportFunction:
    """Support of sum(weights[i] * bodies[i])."""
    if len(weights) != len(bodies) or not bodies:
        raise ValueError(f"Need one weight per body, got {len(weights)} weights and {len(bodies)} bodies")
    weights = [float(w) for w in weights]
    validate_weights(weights)
    grid = _check_same_grid(*bodies)
    stacked = np.stack([b.values for b in bodies])
    return SupportFunction(grid, np.tensordot(weights, stacked, axes=1))


def mean_width(h: SupportFunction) -> float:
    """b = (1/pi) * integral of h over the circle (trapezoid rule)."""
    return float(h.grid.dtheta / math.pi * np.sum(h.values))


def steiner_point(h: SupportFunction) -> np.ndarray:
    """s = (1/pi) * integral of h(theta) * (cos theta, sin theta)."""
    return h.grid.dtheta / math.pi * (h.values @ h.grid.directions)


def area(h: SupportFunction) -> float:
    """Enclosed area, (1/2) * integral of (h^2 - h'^2)."""
    return float(0.5 * h.grid.dtheta * np.sum(h.values**2 - h.derivative()**2))


def urysohn_gap(h: SupportFunction) -> float:
    """(b/2)^2 - area/pi; nonnegative, zero for disks."""
    return (mean_width(h) / 2.0)**2 - area(h) / math.pi


def width_function(h: SupportFunction) -> np.ndarray:
    """w(theta) = h(theta) + h(theta + pi)."""
    return h.values + np.roll(h.values, -h.grid.M // 2)


def min_width(h: SupportFunction) -> float:
    return float(np.min(width_function(h)))


class Radii(NamedTuple):
    r_in: float
    R_out: float
    c_in: np.ndarray
    c_out: np.ndarray


def inradius_outradius(h: SupportFunction) -> Radii:
    """
    Discrete Chebyshev centers over the sampled directions.

    r_in = max_c min_j (h_j - <c, theta_j>) and
    R_out = min_c max_j (h_j - <c, theta_j>), each one linear program.
    """
    dirs = h.grid.directions
    M = h.grid.M
    free = [(None, None)] * 3

    # x = (cx, cy, r): maximize r subject to r + <c, theta_j> <= h_j
    inner = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.column_stack([dirs, np.ones(M)]),
        b_ub=h.values,
        bounds=free,
        method="highs",
    )
    if not inner.success:
        raise OptimizationError(
            f"Inradius program failed: {inner.message}",
            {"status": int(inner.status), "iterate": _iterate(inner)},
        )

    # x = (cx, cy, R): minimize R subject to h_j - <c, theta_j> <= R
    outer = linprog(
        c=[0.0, 0.0, 1.0],
        A_ub=np.column_stack([-dirs, -np.ones(M)]),
        b_ub=-h.values,
        bounds=free,
        method="highs",
    )
    if not outer.success:
        raise OptimizationError(
            f"Outradius program failed: {outer.message}",
            {"status": int(outer.status), "iterate": _iterate(outer)},
        )

    r_in = float(inner.x[2])
    R_out = float(outer.x[2])
    if r_in <= DEGENERATE_REL * max(h.scale, 1e-300):
        raise DegenerateBodyError(f"Body has no interior (r_in={r_in})", {"r_in": r_in, "R_out": R_out})
    return Radii(r_in, R_out, np.asarray(inner.x[:2]), np.asarray(outer.x[:2]))


def _iterate(res) -> Optional[List[float]]:
    return None if res.x is None else [float(x) for x in res.x]


def project_to_convex(
    h: Union[SupportFunction, np.ndarray],
    grid: Optional[DirectionGrid] = None,
    tol_convex: float = DEFAULT_TOL_CONVEX,
) -> SupportFunction:
    """
    Closest admissible support function for raw samples.

    Samples that already pass the discrete convexity test are returned
    unchanged. Otherwise the boundary points h*theta + h'*theta^perp are
    reconstructed, their convex hull is taken and its support function is
    resampled on the grid.
    """
    if isinstance(h, SupportFunction):
        grid, values = h.grid, np.asarray(h.values, dtype=float)
    else:
        if grid is None:
            raise ValueError("Raw samples need a grid")
        values = np.asarray(h, dtype=float)
    if values.shape != (grid.M,) or not np.all(np.isfinite(values)):
        raise InvalidBodyError("project_to_convex needs finite samples on the grid")

    if is_discretely_convex(values, grid.dtheta, tol_convex):
        return SupportFunction(grid, values)

    dirs = grid.directions
    points = (values[:, None] * dirs
              + theta_derivative(values, grid.dtheta)[:, None] * grid.tangents)
    scale = float(np.max(np.abs(points)))
    try:
        hull = ConvexHull(points)
    except QhullError as e:
        raise DegenerateBodyError(f"Convex hull is degenerate: {e}", {"scale": scale})
    if hull.volume <= 1e-12 * scale**2:
        raise DegenerateBodyError("Convex hull has no interior", {"area": float(hull.volume), "scale": scale})

    vertices = points[hull.vertices]
    projected = np.max(vertices @ dirs.T, axis=0)
    logger.debug(f"Projected support onto hull of {len(vertices)} vertices "
                 f"(max change {np.max(np.abs(projected - values)):.3e})")
    return SupportFunction(grid, projected)


def hausdorff_distance(h1: SupportFunction, h2: SupportFunction) -> float:
    _check_same_grid(h1, h2)
    return float(np.max(np.abs(h1.values - h2.values)))


def translate(h: SupportFunction, v: Sequence[float]) -> SupportFunction:
    """Support of K + v."""
    return h.with_values(h.values + h.grid.directions @ np.asarray(v, dtype=float))


def normalize(h: SupportFunction) -> Tuple[SupportFunction, np.ndarray]:
    """Translate the body so its Steiner point is the origin; returns (body, old Steiner point)."""
    s = steiner_point(h)
    return translate(h, -s), s


def homothety_defect(h0: SupportFunction, h1: SupportFunction) -> float:
    """
    Relative distance from h1 to the homothetic copy of h0.

    Both bodies are Steiner-centred and normalised to unit mean width;
    zero iff the samples are homothetic.
    """
    _check_same_grid(h0, h1)
    c0, _ = normalize(h0)
    c1, _ = normalize(h1)
    return float(np.max(np.abs(c0.values / mean_width(c0) - c1.values / mean_width(c1))))


def symmetry_order(h: SupportFunction, tol: float = 1e-9) -> int:
    """Largest q such that the Steiner-centred body is invariant under rotation by 2*pi/q on the grid."""
    centred, _ = normalize(h)
    values = centred.values
    M = h.grid.M
    for shift in range(1, M):
        if M % shift:
            continue
        if np.max(np.abs(np.roll(values, shift) - values)) <= tol * max(centred.scale, 1e-300):
            return M // shift
    return 1


def ball_support(grid: DirectionGrid, radius: float, center: Sequence[float] = (0.0, 0.0)) -> SupportFunction:
    return SupportFunction(grid, radius + grid.directions @ np.asarray(center, dtype=float))


def rotate_samples(h: SupportFunction, shift: int) -> SupportFunction:
    """Rotate the body by shift*dtheta about the origin (exact on the grid)."""
    return h.with_values(np.roll(h.values, int(shift)))


def interpolate_support(h: SupportFunction, theta: Union[float, np.ndarray]) -> np.ndarray:
    """Periodic linear interpolation of the samples at arbitrary angles."""
    return np.interp(theta, h.theta, h.values, period=2.0 * math.pi)
