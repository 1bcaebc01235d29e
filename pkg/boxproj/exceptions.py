"""
Exceptions for boxproj.

Every error carries the process exit code the command line front end
reports for it: 2 for usage and validation problems, 3 for I/O.
"""


class BoxprojError(Exception):
    """
    Base class for all boxproj errors.

    Attributes:
        exit_code (int): Exit status reported by the CLI (default: 2)
    """

    exit_code = 2


class InvalidParameterError(BoxprojError, ValueError):
    """A parameter is outside its mathematical domain (dim < 1, ratio <= 0, ...)."""


class ParameterRangeError(InvalidParameterError):
    """A parameter is valid in principle but outside the accepted range."""


class ShapeError(InvalidParameterError):
    """Array dimensions do not match."""


class DomainError(InvalidParameterError):
    """A numeric kernel received a non-finite argument."""


class CapacityError(BoxprojError):
    """An exhaustive operation was asked for more items than its cap allows."""


class DegeneratePartitionError(BoxprojError):
    """A binary partition has an empty class."""


class DegenerateLabelsError(BoxprojError):
    """Threshold search was given labels from a single class."""


class ArtifactIOError(BoxprojError):
    """A file could not be read or written."""

    exit_code = 3
