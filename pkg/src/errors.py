"""Exception hierarchy shared by the geometry, ring and free-boundary solvers."""

from typing import Any, Dict, Optional


class BernoulliLabError(Exception):
    """
    Base class for every solver-level failure.

    Attributes:
        kind: Stable machine-readable error name (used in CLI JSON output)
        detail: Human-readable description
        context: Numbers that explain the failure (iterate, residuals, ...)
    """

    kind = "bernoulli_lab_error"

    def __init__(self, detail: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(detail)
        self.detail = detail
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to the structured {kind, detail, context} form."""
        return {
            "kind": self.kind,
            "detail": self.detail,
            "context": self.context,
        }


class InvalidBodyError(BernoulliLabError):
    """Body description violates its own invariants (negative radius, bad weights, ...)."""
    kind = "invalid_body"


class DegenerateBodyError(BernoulliLabError):
    """Body collapsed to a segment or a point."""
    kind = "degenerate_body"


class GridMismatchError(BernoulliLabError):
    """Operands live on different direction grids (or different ring grids)."""
    kind = "grid_mismatch"


class OptimizationError(BernoulliLabError):
    """Inradius/outradius linear program did not converge."""
    kind = "optimization_error"


class NewtonDivergence(BernoulliLabError):
    """Ring Newton iteration stagnated or hit its iteration cap."""
    kind = "newton_divergence"


class ConvexityLoss(BernoulliLabError):
    """A level slice lost positive radius of curvature."""
    kind = "convexity_loss"


class GridTooCoarse(BernoulliLabError):
    """Converged ring violates monotonicity in t or slice convexity."""
    kind = "grid_too_coarse"


class TrialDivergence(BernoulliLabError):
    """Free-boundary trial iteration stopped making progress."""
    kind = "trial_divergence"


class BracketInversion(BernoulliLabError):
    """Feasibility was not monotone over the Bernoulli-constant bracket."""
    kind = "bracket_inversion"


class InfeasibleTau(BernoulliLabError):
    """Requested tau lies below the Bernoulli constant of the domain."""
    kind = "infeasible_tau"
