"""Horizon exception types.

Every error raised on purpose by the package derives from
`ApplicationError`; the class attribute `exit_code` is what the cli exits
with when the error escapes a command.
"""
from __future__ import annotations

from enum import IntEnum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Any

__all__ = (
    "ApplicationError",
    "ConfigurationError",
    "ConvergenceError",
    "DegenerateConfigurationError",
    "DomainError",
    "ExitCode",
    "IntegrandEvaluationError",
    "MonotoneCurveError",
    "OracleMismatchError",
    "TruncationError",
    "UnphysicalStateError",
)


class ExitCode(IntEnum):
    """Process exit statuses of the cli."""

    SUCCESS = 0
    CONFIG = 1
    NUMERICAL = 2
    ORACLE = 3


class ApplicationError(Exception):
    """Base exception type for the lib's custom exception types."""

    exit_code: ExitCode = ExitCode.NUMERICAL


class DomainError(ApplicationError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class IntegrandEvaluationError(ApplicationError):
    """The integrand returned a non-finite value."""

    def __init__(self, abscissa: float, value: complex) -> None:
        """Integrand evaluation error.

        Args:
            abscissa: where the integrand was evaluated
            value: what it returned
        """
        self.abscissa = abscissa
        self.value = value
        super().__init__(f"integrand returned {value!r} at x = {abscissa!r}")


class ConfigurationError(ApplicationError):
    """A run configuration or parameter is invalid."""

    exit_code = ExitCode.CONFIG


class DegenerateConfigurationError(ConfigurationError):
    """The scenario is outside the numerically supported regime."""


class ConvergenceError(ApplicationError):
    """A numerical result required to be converged is not."""


class MonotoneCurveError(ConvergenceError):
    """A fidelity curve has no interior minimum."""


class UnphysicalStateError(ApplicationError):
    """A covariance matrix violates the uncertainty relation."""

    def __init__(self, determinant: float) -> None:
        self.determinant = determinant
        super().__init__(f"covariance matrix is unphysical: det = {determinant!r} < 1")


class TruncationError(ApplicationError):
    """A truncated Fock space is too small for the requested accuracy."""

    exit_code = ExitCode.ORACLE

    def __init__(self, message: str, required_cutoff: int | None = None) -> None:
        self.required_cutoff = required_cutoff
        super().__init__(message if required_cutoff is None else f"{message} (required cutoff: {required_cutoff})")


class OracleMismatchError(ApplicationError):
    """A brute force check disagrees with the closed form."""

    exit_code = ExitCode.ORACLE

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        self.diagnostics = diagnostics or {}
        super().__init__(message)
