"""Exceptions raised while generating parametric families."""
from npdual.attribute.exceptions import ConfigVerifyError


class FamiliesError(Exception):
    """Base class for family generation errors."""

class SpecVerifyError(ConfigVerifyError):
    """Raised when a Gaussian family description fails to verify."""

class GridTooCoarse(FamiliesError):
    """Raised when a single bin carries too much of some member's probability."""

    def __init__(self, member: str, bin_index: int, probability: float, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)
        self.member: str = member
        self.bin_index: int = bin_index
        self.probability: float = probability

    def __str__(self) -> str:
        """Name the member and the bin."""
        return (f'member {self.member} puts probability {self.probability:.3f} into bin {self.bin_index}; '
                'refine the x grid')

class NotSolved(FamiliesError):
    """Raised when a structural report is requested without a matching solve."""
