"""Shared exception types."""


class ChartViolationError(RuntimeError):
    """An affine-chart inversion hit a singular or ill-conditioned block."""


class DegenerateStartError(RuntimeError):
    """A start solution has a kernel of dimension two or more."""


class ResourceLimitError(RuntimeError):
    """A requested enumeration exceeds its hard budget."""


# Path failure reasons reported by the tracker.
PATH_STALL = "PATH_STALL"
PATH_DIVERGE = "PATH_DIVERGE"
AT_INFINITY = "AT_INFINITY"
CHART_ESCAPE = "CHART_ESCAPE"
WARN_MULTIPLICITY = "WARN_MULTIPLICITY"


class PathError(RuntimeError):
    """A continuation path could not be completed.

    The ``reason`` attribute carries one of the module-level reason codes.
    """

    def __init__(self, reason: str, message: str = ""):
        super().__init__(message or reason)
        self.reason = reason
