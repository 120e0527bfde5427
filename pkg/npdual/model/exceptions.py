"""Exceptions for the model module."""
from typing import Optional


class ProblemValidationError(Exception):
    """Base class for every invariant violation found while validating a testing problem."""

    def __init__(self, field: str, reason: str, index: Optional[int] = None, *args: object) -> None:
        """Default constructor.

        Args:
            field (str): Name of the offending field (ex: "null", "alpha", "R")
            reason (str): Human readable description of the violation
            index (Optional[int], optional): Position within the field, when the field is a list
        """
        super().__init__(*args)

        self.field: str = field
        self.reason: str = reason
        self.index: Optional[int] = index

    def location(self) -> str:
        """Field name with the index appended, ex: null[2]."""
        if self.index is None:
            return self.field
        return f'{self.field}[{self.index}]'

    def __str__(self) -> str:
        """Name the error type, the offending field and index."""
        return f'{type(self).__name__} at {self.location()}: {self.reason}'

class DimensionMismatch(ProblemValidationError):
    """Raised when an array does not have the atom count (or member count) it must have."""

class AlphaOutOfRange(ProblemValidationError):
    """Raised when a significance level is not strictly inside (0, 1)."""

class NegativeDensity(ProblemValidationError):
    """Raised when a density has a negative or non-finite value."""

class UnnormalizedDensity(ProblemValidationError):
    """Raised when a density does not integrate to one against the reference measure."""

class EmptyFamily(ProblemValidationError):
    """Raised when a hypothesis family has no members."""

class DuplicateMember(ProblemValidationError):
    """Raised when two members of one family coincide."""

class DuplicateAtom(ProblemValidationError):
    """Raised when two atoms share a label."""

class InvalidReferenceMeasure(ProblemValidationError):
    """Raised when the reference weights are not strictly positive or do not sum to one."""

class InvalidTest(ProblemValidationError):
    """Raised when a randomized test takes values outside [0, 1]."""

class InvalidPrior(ProblemValidationError):
    """Raised when prior weights are negative or not finite."""

class ProblemFormatError(ProblemValidationError):
    """Raised when a problem file is not valid JSON or misses a required field."""
