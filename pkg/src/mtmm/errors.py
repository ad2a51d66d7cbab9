"""Exception types raised by the library."""


class NumericalError(ArithmeticError):
    """Base class for failures of a numerical procedure on valid input."""


class DegenerateMatrixError(NumericalError):
    """The m22 entry of a transfer matrix underflowed; the stack is non-physical."""


class TrackingError(NumericalError):
    """A displaced cavity resonance left the bracket it was searched in."""


class StepDegenerateError(NumericalError):
    """A finite-difference step could not resolve the resonance shift."""


class ClassificationError(NumericalError):
    """Two independent classifiers of the same quantity disagree."""


class PoleError(NumericalError):
    """An analytic expression was evaluated at (or too close to) a pole."""


class NotTransmissiveError(NumericalError):
    """A transmissive-point formula was evaluated away from a transmissive point."""


class GeometryError(ValueError):
    """A stack or cavity layout is geometrically invalid."""


class PositionError(ValueError):
    """A field sample was requested outside the extent of a stack."""


class ConfigError(ValueError):
    """An experiment configuration failed validation.

    The message starts with the dotted path of the offending field.
    """
