"""Exception hierarchy shared by every module.

The command-line front end maps :class:`ConfigError` to exit code 2 and
every other :class:`MaglabError` to exit code 3.
"""


class MaglabError(Exception):
    """Base class for all errors raised by the package."""


class ConfigError(MaglabError, ValueError):
    """Invalid user input: bad scenario configuration or argument."""


class NumericError(MaglabError):
    """A numerical computation could not be completed."""


class DifferentiationError(NumericError):
    """Finite differencing met a non-finite field value."""

    def __init__(self, axis, message=None):
        self.axis = axis
        super().__init__(message or f"non-finite field value while differentiating along axis {axis}")


class DegenerateMetricError(NumericError):
    """Metric determinant is too small to invert."""

    def __init__(self, det, message=None):
        self.det = det
        super().__init__(message or f"degenerate metric: |det g| = {abs(det):.3e}")


class ContractionError(MaglabError, ValueError):
    """Index pairing with mismatched variance or dimension."""


class BasisMismatchError(ContractionError):
    """Holonomic and frame-indexed components were combined."""


class SymmetryError(MaglabError, ValueError):
    """Components violate a declared index symmetry."""


class OrthogonalizationError(NumericError):
    """Gram-Schmidt met a null or linearly dependent seed vector."""


class NotLorentzError(MaglabError, ValueError):
    """A frame map does not preserve the frame metric."""


class RegionError(MaglabError, ValueError):
    """Point lies outside the valid region of a chart (for example r <= rg)."""


class IntegrationError(NumericError):
    """ODE integration failed; ``location`` holds the last accepted state."""

    def __init__(self, message, s=None, location=None):
        self.s = s
        self.location = location
        super().__init__(message)
