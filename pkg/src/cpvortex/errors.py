"""Exception hierarchy shared by all cpvortex modules."""


class CpvortexError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatchError(CpvortexError):
    """Operands live on spaces of different dimension."""


class ChartDegenerateError(CpvortexError):
    """The requested affine chart has a pivot coordinate too close to zero."""


class OutsideBigCellError(CpvortexError):
    """A matrix represents a flag outside the big Bruhat cell (LU pivot failure)."""


class SingularityError(CpvortexError):
    """Evaluation requested at (or beyond) a singular point of a Green's function."""


class DomainError(CpvortexError):
    """Argument outside the mathematical domain of the operation."""


class CollisionError(CpvortexError):
    """Two vortices are closer than the collision threshold.

    ``step_index`` is set when the collision is detected during time
    integration, otherwise it is None.
    """

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


class ConfigurationError(CpvortexError):
    """A vortex system or run configuration is internally inconsistent."""


class OracleError(CpvortexError):
    """A numerical oracle failed to reach its target tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NumericError(CpvortexError):
    """A numerical procedure failed (step-size underflow, non-finite values)."""
