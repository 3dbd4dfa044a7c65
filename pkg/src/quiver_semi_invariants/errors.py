"""
Exception hierarchy for quiver-semi-invariants.

InputError subclasses describe bad input (CLI exit code 2); AnalysisError
subclasses describe an analysis that ran but could not reach its conclusion
(CLI exit code 1).
"""

from typing import Any


class QsiError(Exception):
    """Base class for every error raised by the library."""

    exit_code: int = 1


class InputError(QsiError):
    """Input data or parameters are unusable."""

    exit_code = 2


class AnalysisError(QsiError):
    """An analysis could not certify its result."""

    exit_code = 1


class ConfigError(InputError):
    """The configuration file is missing, unreadable or invalid."""


class FileFormatError(InputError):
    """A quiver, system or point file does not follow its JSON format."""


class ValidationFailed(InputError):
    """A quiver with relations failed validation; carries the full report when known."""

    def __init__(self, message: str, report: Any = None) -> None:
        super().__init__(message)
        self.report = report


class DanglingArrow(ValidationFailed):
    """An arrow references a vertex that does not exist."""


class NonUniformRelation(ValidationFailed):
    """A relation mixes paths with different tails or heads."""


class BrokenPath(ValidationFailed):
    """A path uses an unknown arrow or two arrows that do not compose."""


class IndexMismatch(InputError):
    """A vector is not indexed by the vertices of the quiver."""


class InvalidPath(InputError):
    """A path is not valid in the given quiver."""


class ShapeMismatch(InputError):
    """Matrix shapes do not match a dimension vector or each other."""


class CyclicQuiver(InputError):
    """The operation needs an acyclic quiver without relations."""


class ZeroVector(InputError):
    """The operation needs a nonzero dimension vector."""


class BadParams(InputError):
    """Fixture, field or scan parameters are outside their admissible range."""


class UnknownSymbol(InputError):
    """A polynomial uses a name that is not a generator or coordinate."""


class CertificationFailed(AnalysisError):
    """A sampled canonical decomposition could not be certified."""


class NotFoundInBox(AnalysisError):
    """No weight with at least two monomials exists within the search box."""


class NoMonomial(AnalysisError):
    """The weight is not realized by any monomial in the generators."""


class PZero(AnalysisError):
    """The denominator monomial of a pencil vanishes at the given point."""
