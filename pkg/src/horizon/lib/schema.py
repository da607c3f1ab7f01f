from __future__ import annotations

import math

from pydantic import BaseModel as _BaseModel
from pydantic import validator

__all__ = ["BaseModel", "ComplexValue", "FrozenModel", "StrictModel"]


class BaseModel(_BaseModel):
    """Base Settings."""

    class Config:
        """Base Settings Config."""

        case_sensitive = False
        validate_assignment = True
        orm_mode = True
        use_enum_values = True
        arbitrary_types_allowed = True


class FrozenModel(BaseModel):
    """Immutable, hashable schema; used for memoization keys."""

    class Config:
        """Frozen config."""

        allow_mutation = False
        frozen = True


class StrictModel(BaseModel):
    """Schema that rejects unknown keys (run configuration files)."""

    class Config:
        """Strict config."""

        extra = "forbid"


class ComplexValue(FrozenModel):
    """A complex number with both components finite."""

    re: float
    im: float

    @validator("re", "im")
    def check_finite(cls, value: float) -> float:
        """Reject NaN and infinities."""
        if not math.isfinite(value):
            raise ValueError("complex components must be finite")
        return value

    @classmethod
    def from_complex(cls, value: complex) -> ComplexValue:
        """Wrap a python complex."""
        return cls(re=float(value.real), im=float(value.imag))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    @property
    def value(self) -> complex:
        """The wrapped python complex."""
        return complex(self.re, self.im)
