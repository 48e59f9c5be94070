"""Exception types shared across the package.

Every raise site uses one of these so callers (and the CLI exit-code
mapping) can tell input problems apart from budget exhaustion and from
internal invariant violations.
"""


class FanDivError(Exception):
    """Base class for all package errors."""


class DegenerateSimplex(FanDivError):
    """Vertex matrix is rank deficient (volume ~ 0)."""


class OffCenter(FanDivError):
    """Simplex barycenter is not at the origin and recentering was not requested."""


class DegenerateCone(FanDivError):
    """Cone generators do not span the expected dimension."""


class DimensionTooLarge(FanDivError):
    """Requested operation only supports low ambient dimension."""


class NotRegular(FanDivError):
    """Operation requires a regular simplex (all pairwise vertex distances equal)."""


class PointOutside(FanDivError):
    """Query point lies outside the required carrier region."""


class TrivialPartition(FanDivError):
    """Curtain partition must be a proper nonempty subset of {1..d}."""


class InvalidBarycentric(FanDivError):
    """Barycentric input has a negative entry or does not sum to one."""


class EmptyMeasure(FanDivError):
    """Mass distribution has nonpositive total mass."""


class NotPrimePower(FanDivError):
    """Fan division part count must be a prime power."""


class UnsupportedVariant(FanDivError):
    """Requested a mode/variant outside the implemented scope."""


class DegenerateProjection(FanDivError):
    """Wall-cell plane projects to an empty or unbounded planar curve."""


class SceneError(FanDivError):
    """Scene file is missing, malformed, or fails validation."""


class BudgetExceeded(FanDivError):
    """Search budget ran out before the residual target was met.

    Carries the best iterate found so far (a ``Solution`` for the solvers)
    so callers can still report partial progress.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InversionBudgetExceeded(BudgetExceeded):
    """psi inversion did not reach tolerance; ``best`` is (x, residual)."""
