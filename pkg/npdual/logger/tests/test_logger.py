"""Tests for the component loggers and the logging setup."""
import logging

import pytest

from npdual.logger.core import CoreLogger
from npdual.logger.utils import build_config, resolve_level, setup_logging


class ListHandler(logging.Handler):
    """Keep every record that reaches the handler."""

    def __init__(self) -> None:
        super().__init__(level=logging.DEBUG)
        self.records = []

    def emit(self, record: logging.LogRecord) -> None:
        self.records.append(record)


@pytest.fixture
def handler():
    """Attach a recording handler to the simplex logger for one test."""
    recorder = ListHandler()
    target = logging.getLogger('npdual.simplex')
    previous = target.level
    target.addHandler(recorder)
    target.setLevel(logging.DEBUG)
    try:
        yield recorder
    finally:
        target.removeHandler(recorder)
        target.setLevel(previous)


def test_component_is_attached(handler):
    """Every record names its component."""
    logger = CoreLogger(component='simplex')
    logger.debug('pivot')
    logger.log('solved', extra={'rows': 3})
    logger.warning('slow')
    logger.critical('broken')

    assert [record.levelname for record in handler.records] == ['DEBUG', 'INFO', 'WARNING', 'CRITICAL']
    assert all(record.component == 'simplex' for record in handler.records)
    assert handler.records[1].rows == 3

def test_resolve_level():
    """Known names map onto levels, anything else onto WARNING."""
    assert resolve_level('debug') == 'DEBUG'
    assert resolve_level(' Info ') == 'INFO'
    assert resolve_level(None) == 'WARNING'
    assert resolve_level('loud') == 'WARNING'

def test_build_config():
    """One logger entry per component, none propagating."""
    config = build_config('INFO')
    assert config['loggers']['npdual.certify'] == {'handlers': ['core'], 'level': 'INFO', 'propagate': False}
    assert 'npdual.families' in config['loggers']
    assert '%(component)s' in config['formatters']['core']['format']

def test_setup_logging_reads_environment(monkeypatch):
    """NPDUAL_LOG sets the level of every component logger."""
    monkeypatch.setenv('NPDUAL_LOG', 'debug')
    try:
        assert setup_logging() == 'DEBUG'
        assert logging.getLogger('npdual.oracle').level == logging.DEBUG
        assert setup_logging('critical') == 'CRITICAL'
        assert logging.getLogger('npdual.oracle').level == logging.CRITICAL
    finally:
        # Hand the loggers back to pytest
        for name in build_config('WARNING')['loggers']:
            component = logging.getLogger(name)
            component.handlers.clear()
            component.propagate = True
            component.setLevel(logging.NOTSET)
