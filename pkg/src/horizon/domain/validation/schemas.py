from __future__ import annotations

from typing import Any

from horizon.lib.schema import BaseModel

__all__ = ["CheckResult", "ValidationReport"]


class CheckResult(BaseModel):
    """One named check with its worst error."""

    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: dict[str, Any] = {}


class ValidationReport(BaseModel):
    checks: list[CheckResult]
    cross_sign: int | None = None
    """Cross block sign resolved by the Fock oracle."""
    amplitude_sign: int = 1
    """Sign ε of the squeezed state amplitudes the oracle was built with."""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    @property
    def positive_amplitude_sign(self) -> int | None:
        """The resolved sign translated to positive `tanh^n s` amplitudes."""
        return None if self.cross_sign is None else self.cross_sign * self.amplitude_sign
