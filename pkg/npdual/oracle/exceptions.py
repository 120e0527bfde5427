"""Exceptions raised by the ground-truth oracles."""


class OracleError(Exception):
    """Base class for oracle errors."""

class TooLarge(OracleError):
    """Raised when a grid enumeration would visit too many points."""

    def __init__(self, points: int, limit: int, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)
        self.points: int = points
        self.limit: int = limit

    def __str__(self) -> str:
        """Report the requested and allowed grid sizes."""
        return f'grid has {self.points} points, more than the limit of {self.limit}'

class NotSingleton(OracleError):
    """Raised when the closed-form oracle is asked about a composite hypothesis."""

class InvalidSteps(OracleError):
    """Raised when the grid resolution is not a positive integer."""
