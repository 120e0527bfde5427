"""Package versioning info."""
# Automatically created. Please do not edit.
# noqa
__version__ = '0.1.0'
__author__ = 'npdual developers'
