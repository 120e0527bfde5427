"""Fixtures for the CLI tests."""
import logging

import pytest

from npdual.utils.constants import COMPONENTS


@pytest.fixture(autouse=True)
def restore_loggers():
    """The CLI configures logging on every run; undo it so later tests see plain loggers."""
    yield
    for component in COMPONENTS:
        logger = logging.getLogger(f'npdual.{component}')
        logger.handlers.clear()
        logger.propagate = True
        logger.setLevel(logging.NOTSET)
