from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any, Protocol

import numpy as np
from pydantic import validator

from horizon.lib import settings
from horizon.lib.schema import FrozenModel

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = ["CovarianceMatrix", "DiscriminationResult", "ModeOverlaps", "SqueezingParam"]


class ModeOverlaps(Protocol):
    """Anything carrying the four overlaps of Rob's mode with Alice's and Bob's."""

    alpha: Any
    alpha_prime: Any
    beta: Any
    beta_prime: Any


class CovarianceMatrix(FrozenModel):
    """Symmetric 2×2 quadrature covariance, vacuum = identity."""

    s11: float
    s12: float
    s22: float

    @validator("s11", "s12", "s22")
    def check_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("covariance entries must be finite")
        return value

    @classmethod
    def from_array(cls, matrix: npt.ArrayLike) -> CovarianceMatrix:
        """Symmetrize and wrap a 2×2 array."""
        m = np.asarray(matrix, dtype=np.float64)
        return cls(s11=float(m[0, 0]), s12=float(0.5 * (m[0, 1] + m[1, 0])), s22=float(m[1, 1]))

    @property
    def determinant(self) -> float:
        return self.s11 * self.s22 - self.s12 * self.s12

    @property
    def is_physical(self) -> bool:
        """Uncertainty relation det σ >= 1 with positive diagonal."""
        return self.s11 > 0 and self.s22 > 0 and self.determinant >= 1.0 - settings.gaussian.PHYSICALITY_TOL

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.array([[self.s11, self.s12], [self.s12, self.s22]])

    def __add__(self, other: CovarianceMatrix) -> CovarianceMatrix:
        return CovarianceMatrix(s11=self.s11 + other.s11, s12=self.s12 + other.s12, s22=self.s22 + other.s22)

    def __sub__(self, other: CovarianceMatrix) -> CovarianceMatrix:
        return CovarianceMatrix(s11=self.s11 - other.s11, s12=self.s12 - other.s12, s22=self.s22 - other.s22)


class DiscriminationResult(FrozenModel):
    """Fidelity of the two scenarios and the bounds on the minimum error probability."""

    fidelity: float
    f_minus: float
    f_plus: float
    det_sum: float
    """Δ = det(σ + σ_s)."""
    det_prod_term: float
    """δ = (det σ − 1)(det σ_s − 1), clamped at 0."""


class SqueezingParam(FrozenModel):
    """Squeezing of the two-mode squeezed state; its reduction is thermal."""

    s: float

    @validator("s")
    def check_range(cls, value: float) -> float:
        if not 0.0 <= value <= settings.gaussian.MAX_SQUEEZING:
            raise ValueError(f"squeezing must lie in [0, {settings.gaussian.MAX_SQUEEZING}]")
        return value

    def __float__(self) -> float:
        return self.s
