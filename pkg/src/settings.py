"""
Lab settings.

Every numeric default lives here. Values can be overridden through
BERNOULLI_LAB_<FIELD> environment variables (for example
BERNOULLI_LAB_M=128 or BERNOULLI_LAB_NEWTON_TOL=1e-10) and then per run
through CLI flags. BERNOULLI_LAB_OUT sets the default output directory.
"""

import os
import logging
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict

from .convex_geometry import DirectionGrid
from .ring_solver import PLaplaceParams

logger = logging.getLogger(__name__)

ENV_PREFIX = "BERNOULLI_LAB_"
OUT_DIR_ENV = "BERNOULLI_LAB_OUT"


@dataclass(frozen=True)
class LabSettings:
    """
    Discretization and tolerance settings for one run.

    Attributes:
        M: Number of directions on the angular grid
        L: Number of t-intervals of the ring grid
        newton_tol: Ring residual tolerance (relative to max(1, max h_t^2))
        max_newton: Newton iteration cap
        damping: Initial Newton step factor
        fp_tol: Relative free-boundary gradient tolerance
        bisect_tol: Relative bracket width for the Bernoulli constant
        incl_tol_rel: Inclusion-margin tolerance, relative to body scale
        uniq_tol_rel: Uniqueness tolerance, relative to body scale
        sign_tol_rel: Band for signs of the p-Laplacian expression
        mono_tol_rel: Gradient-monotonicity tolerance, relative to max gradient
        hm_tol: Harmonic-mean identity tolerance
        tol_convex: Discrete convexity tolerance, relative to body scale
        delta_curv_rel: Smallest admissible radius of curvature in Newton iterates
        step0: Initial trial step
        step_floor: Trial step below which the iteration gives up
        max_trial: Trial iteration cap
        patience: Trial iterations allowed without improvement
        r_min_rel: Interior degeneracy threshold, relative to r_in(Omega)
        delta0_rel: Inner parallel distance of the interior start, relative to r_in(Omega)
        bracket_pad: Multiplicative padding of the analytic Lambda bracket
        max_bisect: Cap on feasibility solves during bisection
        jobs: Concurrent harness cases
        out_dir: Directory for CSV artifacts
    """
    M: int = 256
    L: int = 128
    newton_tol: float = 1e-8
    max_newton: int = 50
    damping: float = 1.0
    fp_tol: float = 1e-6
    bisect_tol: float = 1e-4
    incl_tol_rel: float = 1e-4
    uniq_tol_rel: float = 1e-3
    sign_tol_rel: float = 1e-6
    mono_tol_rel: float = 1e-6
    hm_tol: float = 1e-6
    tol_convex: float = 1e-9
    delta_curv_rel: float = 1e-6
    step0: float = 0.5
    step_floor: float = 1e-3
    max_trial: int = 200
    patience: int = 20
    r_min_rel: float = 0.02
    delta0_rel: float = 0.05
    bracket_pad: float = 1.05
    max_bisect: int = 30
    jobs: int = 1
    out_dir: str = "out"

    def __post_init__(self):
        if self.fp_tol <= 0 or self.bisect_tol <= 0 or self.newton_tol <= 0:
            raise ValueError("Tolerances must be positive")
        if not 0 < self.step_floor <= self.step0:
            raise ValueError(f"Need 0 < step_floor <= step0, got {self.step_floor}, {self.step0}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if self.bracket_pad < 1.0:
            raise ValueError(f"bracket_pad must be >= 1, got {self.bracket_pad}")

    @classmethod
    def from_env(cls) -> "LabSettings":
        """Build settings from BERNOULLI_LAB_* environment variables."""
        values: Dict[str, Any] = {}
        for f in fields(cls):
            env_name = OUT_DIR_ENV if f.name == "out_dir" else f"{ENV_PREFIX}{f.name.upper()}"
            raw = os.environ.get(env_name)
            if raw is None or raw == "":
                continue
            try:
                values[f.name] = type(f.default)(raw)
            except ValueError:
                raise ValueError(f"Invalid value for {env_name}: {raw!r}")
            logger.debug(f"Setting {f.name}={values[f.name]} from {env_name}")
        return cls(**values)

    def with_overrides(self, **overrides: Any) -> "LabSettings":
        """Return a copy with the non-None overrides applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ValueError(f"Unknown settings: {', '.join(sorted(unknown))}")
        return replace(self, **changes)

    def grid(self) -> DirectionGrid:
        return DirectionGrid(self.M)

    def plaplace(self, p: float) -> PLaplaceParams:
        """Ring-solver parameters for exponent p on this grid."""
        return PLaplaceParams(
            p=p,
            grid=self.grid(),
            L=self.L,
            newton_tol=self.newton_tol,
            max_newton=self.max_newton,
            damping=self.damping,
            delta_curv_rel=self.delta_curv_rel,
            tol_convex=self.tol_convex,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
