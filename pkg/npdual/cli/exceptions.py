"""Exceptions which end a CLI run with a specific exit code."""
import click


class ValidationFailed(click.ClickException):
    """Raised when the input or the options do not validate."""

    exit_code = 2

class CertificationFailed(click.ClickException):
    """Raised after the reports are written when a certificate does not hold."""

    exit_code = 3
