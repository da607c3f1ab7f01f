"""Special functions.

Only what the Bogoliubov coefficients and the Unruh occupation need:
the complex log-Gamma on the line `1 - iy`, the Bose-Einstein weight and
the two-wedge squeezing parameter.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
from scipy import special

from horizon.lib.exceptions import DomainError
from horizon.lib.schema import ComplexValue

from .schemas import RindlerFrequency

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = [
    "critical_frequency",
    "log_gamma",
    "log_gamma_array",
    "occupation_weights",
    "rindler_squeezing",
    "thermal_regime",
    "unruh_occupation",
]

_SERIES_SWITCH = 0.5


def _omega(omega: float | RindlerFrequency) -> float:
    value = omega.omega if isinstance(omega, RindlerFrequency) else float(omega)
    if not value > 0:
        raise DomainError(f"Rindler frequency must be positive, got Ω = {value!r}")
    return value


def log_gamma(z: complex | ComplexValue) -> ComplexValue:
    """Principal branch of log Γ(z).

    >>> abs(log_gamma(2).value) < 1e-15
    True

    Args:
        z: Any point off the poles of Γ.

    Raises:
        DomainError: `z` is a non-positive integer.
    """
    value = complex(z)
    if value.imag == 0 and value.real <= 0 and value.real == math.floor(value.real):
        raise DomainError(f"Γ has a pole at z = {value.real:g}")
    return ComplexValue.from_complex(complex(special.loggamma(value)))


def log_gamma_array(z: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Vectorized `log_gamma` without the pole check, for points off the real axis."""
    return special.loggamma(np.asarray(z, dtype=np.complex128))


def occupation_weights(omega: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """1/(e^{2πΩ} − 1) for an array of positive Ω."""
    x = 2.0 * math.pi * np.asarray(omega, dtype=np.float64)
    return np.exp(-x) / -np.expm1(-x)


def unruh_occupation(omega: float | RindlerFrequency) -> float:
    """Bose-Einstein occupation 1/(e^{2πΩ} − 1) of a Rindler mode.

    >>> round(unruh_occupation(math.log(2) / (2 * math.pi)), 12)
    1.0

    Raises:
        DomainError: Ω <= 0, where the occupation diverges.
    """
    return float(occupation_weights(_omega(omega)))


def rindler_squeezing(omega: float | RindlerFrequency) -> float:
    """Two-wedge squeezing r_Ω = arctanh(e^{−πΩ}).

    Written with `log1p`/`expm1` so that both the small and the large Ω
    ends keep full relative precision.

    Raises:
        DomainError: Ω <= 0, where the argument of arctanh reaches 1.
    """
    value = _omega(omega)
    q = math.exp(-math.pi * value)
    if q < _SERIES_SWITCH:
        return 0.5 * (math.log1p(q) - math.log1p(-q))
    return 0.5 * (math.log1p(q) - math.log(-math.expm1(-math.pi * value)))


def critical_frequency(accel: float) -> float:
    """k_c = a/2π, below which Rindler modes are thermally populated."""
    if not accel > 0:
        raise DomainError(f"acceleration must be positive, got {accel!r}")
    return accel / (2.0 * math.pi)


def thermal_regime(accel: float, cutoff: float) -> bool:
    """Whether k_c exceeds the infrared cutoff, i.e. a > 2πΛ."""
    return critical_frequency(accel) > cutoff
