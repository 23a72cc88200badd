"""Exception types shared across the package."""


class CnslabError(Exception):
    """Base class for all package-specific errors."""


class SingularTransform(CnslabError):
    """Change of unknowns has zero (or numerically zero) determinant."""


class RankMismatch(CnslabError):
    """Operation requires a coefficient matrix of a different rank."""


class NotInY(CnslabError):
    """Second reduction got a matrix whose row direction is not an anchor."""


class NoIntersection(CnslabError):
    """Degenerate trig solve in the first reduction (should not occur
    for genuine stratum members)."""


class NotRepresentative(CnslabError):
    """Kernel reduction got a matrix that is not one of the canonical
    rank-1 representatives."""


class StepFailure(CnslabError):
    """ODE integrator exceeded its step budget or failed to converge."""


class SubstepDivergence(CnslabError):
    """Pointwise cubic flow grew past the magnitude guard (blowup regime)."""


class BoundaryLeak(CnslabError):
    """More than the configured mass fraction reached the box edge."""


class DomainError(CnslabError):
    """Argument outside the operation's domain (e.g. t <= 0)."""


class NegativeDiscriminant(CnslabError):
    """Mode-splitting frequency undefined: (l6-l1)(l6-3*l1) < 0."""


class InsufficientSnapshots(CnslabError):
    """Too few profile snapshots for the requested extraction."""


class InsufficientSpan(CnslabError):
    """Fit window too short (in samples or in units of log t)."""


class IllConditionedFit(CnslabError):
    """Frequency fit residual landscape is too flat or non-convex to trust."""
