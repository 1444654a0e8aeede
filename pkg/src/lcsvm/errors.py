"""Exception hierarchy shared by every module in the package."""


class LcsvmError(Exception):
    """Base class for all domain errors raised by lcsvm."""


class InputError(LcsvmError, ValueError):
    """Malformed or out-of-range input."""


class DimensionError(InputError):
    """Feature vectors or rasters whose dimensions do not line up."""


class UnsolvableProblemError(InputError):
    """A binary problem that has no meaningful solution (e.g. one class only)."""


class ConvergenceError(LcsvmError):
    """The dual solver hit its iteration cap before meeting the KKT tolerance."""

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class DegenerateMarginalsError(LcsvmError, ZeroDivisionError):
    """Chance agreement is total, so kappa is undefined."""


class FormatError(LcsvmError):
    """A file on disk does not match the expected layout."""


class UnsupportedFeatureError(FormatError):
    """A valid file uses a layout this package does not read or write."""


class SchemaError(FormatError):
    """A model document is missing a field or holds the wrong type."""
