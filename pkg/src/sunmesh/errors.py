"""Exception hierarchy shared by the library and the command line tool.

Every failure mode maps to one process exit code:

* ``FormatError``        -> 1  (unreadable or structurally invalid input)
* ``ToleranceError``     -> 2  (a numerical target was not met)
* ``ValidationError``    -> 3  (mathematically invalid input)
* ``ResourceError``      -> 4  (a configured size or cost cap was exceeded)
"""

from __future__ import annotations


class FormatError(ValueError):
    """Input could not be parsed or its structure is wrong."""


class ValidationError(ValueError):
    """Input parses fine but violates a mathematical precondition."""


class DegenerateInputError(ValidationError):
    """A rotation was requested for data that determines no rotation."""


class ToleranceError(RuntimeError):
    """A computation finished but missed its numerical target.

    Carries the best residual achieved so callers can report it.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class ResourceError(RuntimeError):
    """The requested computation exceeds a configured resource cap."""
