"""Exception taxonomy."""


class ChamberSamplerError(Exception):
    """Base class for all errors raised by this package."""


class LPIterationLimit(ChamberSamplerError):
    """The simplex solver hit its pivot cap before reaching optimality."""


class LPNumericalError(ChamberSamplerError):
    """A solver witness failed re-verification against the constraints."""


class OnBoundaryError(ChamberSamplerError, ValueError):
    """A point lies (numerically) on a hyperplane of the arrangement."""


class AdjacencyViolation(ChamberSamplerError):
    """Crossing a reported face led to an empty chamber."""


class WalkConfigError(ChamberSamplerError, ValueError):
    """Invalid walk configuration, e.g. lazy degree below an observed degree."""


class OracleBudgetExceeded(ChamberSamplerError):
    """The instance is too large for exhaustive enumeration."""
