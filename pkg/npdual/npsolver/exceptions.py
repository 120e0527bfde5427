"""Exceptions raised while solving the max-min problem and evaluating its dual."""


class NpsolverError(Exception):
    """Base class for solver errors."""

class InternalError(NpsolverError):
    """Raised when the linear program reports a status that a valid problem can not produce."""

    def __init__(self, status: str, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)
        self.status: str = status

    def __str__(self) -> str:
        """Describe the impossible status."""
        return f'linear program returned status {self.status} for a validated testing problem'

class InvalidWeights(NpsolverError):
    """Raised when alternative weights leave the simplex or prior weights are negative."""

    def __init__(self, field: str, reason: str, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)
        self.field: str = field
        self.reason: str = reason

    def __str__(self) -> str:
        """Name the offending argument."""
        return f'{self.field}: {self.reason}'

class DegeneratePrior(NpsolverError):
    """Raised when a zero prior is asked to reduce the null family to a single density."""

class InvalidGrid(NpsolverError):
    """Raised when a scan grid has negative or unordered scales."""
