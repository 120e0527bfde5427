"""Module for numerical utilities in npdual."""
from dataclasses import dataclass
from typing import Union


@dataclass
class NpdualRange:
    """Defines the minimum and maximum values for an attribute range check."""

    min: Union[int, float]
    max: Union[int, float]
    min_inclusive: bool = True
    max_inclusive: bool = True

    def in_range(self, value: Union[int, float]) -> bool:
        """Test if the specified value is within the range.

        Args:
            value (Union[int, float]): The value to test

        Returns:
            bool: True if the value is within the range, False otherwise.
        """
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False

        above = self.min <= value if self.min_inclusive else self.min < value
        below = value <= self.max if self.max_inclusive else value < self.max
        return above and below

    def describe(self) -> str:
        """Interval notation for error messages."""
        left = '[' if self.min_inclusive else '('
        right = ']' if self.max_inclusive else ')'
        return f'{left}{self.min}, {self.max}{right}'


# Significance levels live strictly inside the unit interval
OPEN_UNIT = NpdualRange(min=0.0, max=1.0, min_inclusive=False, max_inclusive=False)

POSITIVE = NpdualRange(min=0.0, max=float('inf'), min_inclusive=False)
