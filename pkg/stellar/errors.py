"""Exception hierarchy shared by the services and the command line"""

from __future__ import annotations

from typing import Any, Optional


class StellarError(Exception):
    """Base class for toolkit errors"""


class DomainError(StellarError, ValueError):
    """A precondition of a numerical operation was violated"""


class ZeroPolynomialError(DomainError):
    def __init__(self) -> None:
        super().__init__("zero polynomial")


class RootFindingError(DomainError):
    """Root iteration did not reach the residual bound"""

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class ResourceLimitError(DomainError):
    """Requested size exceeds the configured desk-scale limit"""


class SingularMatrixError(DomainError):
    """Matrix is not invertible"""


class NonUnitaryError(DomainError):
    """Matrix is not unitary within tolerance"""


class InvalidPermutationError(DomainError):
    """Sequence is not a bijection of {1..N}"""


class StateFileError(StellarError):
    """Input document is unreadable or malformed"""


class VerificationFailure(StellarError):
    """A property suite reported a failure"""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report
