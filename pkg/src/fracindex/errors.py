"""Exception types raised across the package."""


class FracIndexError(Exception):
    """Base class for every error raised by fracindex."""


class ModelMismatchError(FracIndexError):
    """Operands live in different cohomology ring models."""


class DomainError(FracIndexError, ValueError):
    """Argument outside the domain of an operation."""


class SeriesOrderError(FracIndexError, ValueError):
    """A genus series was not expanded far enough for the target ring."""


class UnknownSeriesError(FracIndexError, KeyError):
    pass


class SchemaError(FracIndexError, ValueError):
    """Input document does not match the JSON schema."""


class DegreeError(FracIndexError, ValueError):
    """Inconsistent or illegal degrees in a ring model."""


class TruncationError(DegreeError):
    """A product that must vanish above the top degree does not."""


class PairingError(FracIndexError, ValueError):
    """Fundamental-class pairing vanishes on every top-degree monomial."""


class BasisOverflowError(FracIndexError):
    pass


class EllipticityError(FracIndexError):
    """An ellipticity certificate could not be produced.

    ``parameter`` carries the path parameter at which certification failed,
    when the symbol came from a homotopy.
    """

    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter


class WindowError(FracIndexError, ValueError):
    """Trace window or truncation sizes violate the boundary-exclusion rule."""
