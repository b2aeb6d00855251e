"""Exception types raised across the package."""


class MaxDistError(ValueError):
    """Base class for all package errors."""


class DegenerateCloudError(MaxDistError):
    """Fewer than two points where a diameter is required."""


class UndefinedAngleError(MaxDistError):
    """Polar angle requested for the origin."""


class RegionError(MaxDistError):
    """Region parameters violate one of the assumptions A1-A7.

    ``assumption`` names the violated assumption (e.g. ``"A2"``) so that
    command-line front ends can report it.
    """

    def __init__(self, message, assumption=None):
        super().__init__(message)
        self.assumption = assumption


class ShapeConstantError(RegionError):
    """Shape constant outside (0, 2)."""

    def __init__(self, message):
        super().__init__(message, assumption="A5")


class CapUndefinedError(MaxDistError):
    """Cap depth h outside the range where the cap is a single pole cap."""


class SamplerStalledError(RuntimeError):
    """Rejection sampler failed to accept a point for too long."""


class StatisticUndefinedError(MaxDistError):
    """Scaled deficiency requested for a cloud with fewer than two points."""


class TruncationMismatchError(MaxDistError):
    """Two norm-angle samples with different truncation orders."""


class InvalidNAParameters(MaxDistError):
    """Non-positive scale parameters or truncation order."""
