from __future__ import annotations

from pydantic import validator

from horizon.lib.schema import FrozenModel

__all__ = ["RindlerFrequency"]


class RindlerFrequency(FrozenModel):
    """Dimensionless Rindler frequency Ω = |k| c²/a."""

    omega: float

    @validator("omega")
    def check_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("Rindler frequency must be positive")
        return value
