from __future__ import annotations

from pydantic import NonNegativeFloat, NonNegativeInt, PositiveFloat, PositiveInt, conint

from horizon.lib import settings
from horizon.lib.schema import ComplexValue, FrozenModel

__all__ = ["QuadratureConfig", "QuadratureResult"]


class QuadratureConfig(FrozenModel):
    """Tolerances and budget of a single integral."""

    rel_tol: PositiveFloat = settings.quad.REL_TOL
    abs_tol: PositiveFloat = settings.quad.ABS_TOL
    max_evaluations: PositiveInt = settings.quad.MAX_EVALUATIONS
    oscillation_panels_per_period: conint(ge=4) = settings.quad.PANELS_PER_PERIOD  # type: ignore[valid-type]
    min_panels: PositiveInt = settings.quad.MIN_PANELS

    def tolerance(self, value: complex) -> float:
        """Absolute error target for an integral of size `value`."""
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_tolerances(
        self,
        rel_tol: float | None = None,
        abs_tol: float | None = None,
        max_evaluations: int | None = None,
    ) -> QuadratureConfig:
        """Copy with some tolerances replaced."""
        update = {
            "rel_tol": rel_tol,
            "abs_tol": abs_tol,
            "max_evaluations": max_evaluations,
        }
        return self.copy(update={k: v for k, v in update.items() if v is not None})


class QuadratureResult(FrozenModel):
    """Outcome of an integral; budget exhaustion clears `converged`."""

    value: ComplexValue
    error_estimate: NonNegativeFloat
    evaluations: NonNegativeInt
    converged: bool
    diagnostic: str | None = None

    @property
    def complex_value(self) -> complex:
        return self.value.value

    def scaled(self, factor: complex) -> QuadratureResult:
        """The result for `factor` times the integrand."""
        return QuadratureResult(
            value=ComplexValue.from_complex(factor * self.value.value),
            error_estimate=abs(factor) * self.error_estimate,
            evaluations=self.evaluations,
            converged=self.converged,
            diagnostic=self.diagnostic,
        )

    def __add__(self, other: QuadratureResult) -> QuadratureResult:
        diagnostics = [d for d in (self.diagnostic, other.diagnostic) if d]
        return QuadratureResult(
            value=ComplexValue.from_complex(self.value.value + other.value.value),
            error_estimate=self.error_estimate + other.error_estimate,
            evaluations=self.evaluations + other.evaluations,
            converged=self.converged and other.converged,
            diagnostic="; ".join(diagnostics) or None,
        )
