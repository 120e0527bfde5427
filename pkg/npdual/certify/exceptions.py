"""Exceptions raised by the optimality certificates."""


class CertifyError(Exception):
    """Base class for certificate errors."""

class CertificateInconsistency(CertifyError):
    """Raised when a size-feasible test beats the dual objective, which weak duality rules out."""

    def __init__(self, margin: float, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)
        self.margin: float = margin

    def __str__(self) -> str:
        """Report the negative margin."""
        return f'dual objective minus power is {self.margin:.3e} < 0 for a size-feasible test'

class SeedRequired(CertifyError):
    """Raised when randomized checks are requested without a seed."""

class NotCertified(CertifyError):
    """Raised when a structural certificate is requested for a triple that failed slackness."""

    def __init__(self, reason: str, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)
        self.reason: str = reason

    def __str__(self) -> str:
        """Describe why the triple is not certified."""
        return f'triple is not certified optimal: {self.reason}'

class ScalarAlphaRequired(CertifyError):
    """Raised when a single-level certificate is requested for per-member levels."""
