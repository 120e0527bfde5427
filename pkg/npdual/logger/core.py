"""Module for npdual component logging."""
from typing import Optional

from npdual.logger.base import BaseLogger


class CoreLogger(BaseLogger):
    """Provide logging functionality for a single npdual component."""

    def __init__(self, component: str):
        """Bind the logger to a component.

        Args:
            component (str): Name of the functional component making the logging calls. ex: simplex
        """
        self._component: str = component
        super().__init__(name=f'npdual.{component}')

    def _log(self, message: str, level: int, extra: Optional[dict] = None) -> None:
        """Add the component to the extra data and invoke the Python logger.

        Args:
            message (str): Message to log
            level (int): One of the logging module levels
            extra (Optional[dict], optional): Data attached to the log record, gains a component key. Defaults to None.
        """
        # Add the component to the extra data
        if extra is None:
            extra = {'component': self._component}
        else:
            extra['component'] = self._component

        super()._log(message, level, extra)
