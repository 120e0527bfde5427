"""Exceptions for the simplex module."""


class InvalidLinearProgram(Exception):
    """Raised when the arrays of a linear program have inconsistent shapes or bounds."""

class NumericalBreakdown(Exception):
    """Raised when pivoting cycles despite Bland's rule or the final basis is singular."""

    def __init__(self, reason: str, iterations: int, smallest_pivot: float, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)

        self.reason: str = reason
        self.iterations: int = iterations
        self.smallest_pivot: float = smallest_pivot

    def __str__(self) -> str:
        """Describe the breakdown."""
        return (f'{self.reason} after {self.iterations} iterations '
                f'(smallest pivot magnitude {self.smallest_pivot:.3e}); the input is likely ill-conditioned')
