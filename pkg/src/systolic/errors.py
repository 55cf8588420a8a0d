"""Exception types shared across the package.

The CLI maps these onto its exit codes: format problems exit 2,
topological nonexistence exits 3, resource caps exit 4.
"""


class SystolicError(Exception):
    """Base class for all package errors."""


class SurfaceFormatError(SystolicError):
    """Malformed surface/curve text or an invalid rotation system.

    Carries the 1-based line number of the offending input line when the
    error comes from a parser.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NonexistenceError(SystolicError):
    """The requested object does not exist on this surface.

    Examples: first systole of a sphere, essential arc on an annulus.
    """


class CapExceededError(SystolicError):
    """An enumeration exceeded its explicit resource cap."""
