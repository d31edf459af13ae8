"""Exception types raised by obsent.

Validation errors carry the magnitude of the violated invariant so callers
can report how far an input was from acceptable, not just that it failed.
"""


class ObsentError(Exception):
    """Base class for all obsent errors."""


class ValidationError(ObsentError):
    """An input failed a structural invariant.

    Attributes:
        magnitude: size of the violation (e.g. max deviation from Hermiticity),
            or None when the check is purely structural.
    """

    def __init__(self, message, magnitude=None):
        if magnitude is not None:
            message = f"{message} (magnitude {magnitude:.3e})"
        super().__init__(message)
        self.magnitude = magnitude


class NotSquare(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class InvalidAlpha(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class NotARefinement(ValidationError):
    pass


class NonProjectiveCoarseGraining(ValidationError):
    pass


class InvalidTemperature(ValidationError):
    pass


class EnergyOutOfRange(ObsentError):
    """Target mean energy lies at or beyond the spectral endpoints."""


class NoConvergence(ObsentError):
    """An iterative solve failed to reach its tolerance."""


class SchemaError(ObsentError):
    """A JSON artifact does not match the expected schema."""
