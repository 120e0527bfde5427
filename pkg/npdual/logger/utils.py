"""Utilities for managing application logging."""
import logging
import logging.config
import os
from typing import Optional

from npdual.utils.constants import COMPONENTS, LOG_ENV_VAR

LEVELS = {
    'debug': 'DEBUG',
    'info': 'INFO',
    'warning': 'WARNING',
    'critical': 'CRITICAL',
}


def resolve_level(value: Optional[str]) -> str:
    """Map an NPDUAL_LOG value onto a logging level name. Unknown values map to WARNING."""
    if not value:
        return 'WARNING'

    return LEVELS.get(value.strip().lower(), 'WARNING')


def build_config(level: str) -> dict:
    """Build the dictConfig mapping for the requested level."""
    loggers = {
        f'npdual.{component}': {
            'handlers': ['core'],
            'level': level,
            'propagate': False
        } for component in COMPONENTS
    }

    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'core': {
                'format': '%(asctime)s (%(levelname)s:npdual-%(component)s) %(message)s'
            },
        },
        'handlers': {
            'core': {
                'level': 'DEBUG',
                'formatter': 'core',
                'class': 'logging.StreamHandler',
                'stream': 'ext://sys.stdout',  # Default is stderr
            },
        },
        'loggers': loggers,
    }


def setup_logging(level: Optional[str] = None) -> str:
    """Initialize the logging subsystem.

    Args:
        level (Optional[str], optional): Verbosity (debug, info, warning, critical). Read from the
            NPDUAL_LOG environment variable when not given.

    Returns:
        str: The logging level name that was applied
    """
    raw = level if level is not None else os.getenv(LOG_ENV_VAR)
    resolved = resolve_level(raw)
    logging.config.dictConfig(build_config(resolved))

    if raw and raw.strip().lower() not in LEVELS:
        logging.getLogger('npdual.cli').warning(
            f'Unknown {LOG_ENV_VAR} value "{raw}", using WARNING', extra={'component': 'cli'})

    return resolved
