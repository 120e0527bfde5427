"""Module for npdual component loggers."""
from npdual.logger.core import CoreLogger
