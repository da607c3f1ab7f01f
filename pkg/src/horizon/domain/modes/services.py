"""Closed forms for the packet overlaps and the Minkowski to Rindler coefficients.

Units are c = 1 and L = 1 throughout: `l`, `k` are wavenumbers in units
of 1/L and accelerations are aL/c². Every function broadcasts over numpy
arrays and returns a python `complex` for scalar input.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy import integrate as scipy_integrate

from horizon.domain.specfun.services import log_gamma_array
from horizon.lib.exceptions import DomainError

from .schemas import Acceleration, Direction, WavePacketSpec

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = [
    "bogoliubov",
    "bogoliubov_conjugate",
    "bogoliubov_norm_squared",
    "bogoliubov_prefactor",
    "kg_inner_product",
    "minkowski_gaussian_overlap",
    "mirror",
    "packet_envelope",
    "packet_profile",
]

_QUARTER_ROOT_TWO_PI = (2.0 * math.pi) ** 0.25
_GRID_HALF_WIDTH = 10.0
_GRID_POINTS = 20_001


def _accel(accel: Acceleration | float) -> float:
    value = float(accel)
    if not value > 0:
        raise DomainError(f"acceleration must be positive, got a = {value!r}")
    return value


def _nonzero(name: str, value: npt.ArrayLike) -> npt.NDArray[np.float64]:
    array = np.asarray(value, dtype=np.float64)
    if np.any(array == 0):
        raise DomainError(f"{name} = 0 is excluded (1/√|{name}| singularity)")
    return array


def _out(value: npt.NDArray[Any]) -> Any:
    return complex(value) if np.ndim(value) == 0 else value


def packet_envelope(m: npt.ArrayLike, n_param: float) -> npt.NDArray[np.float64]:
    """|(u_l, φ)| on the packet's own half-line, as a function of `m = |l|`."""
    m = np.asarray(m, dtype=np.float64)
    return (n_param + m) / (2.0 * np.sqrt(m * n_param) * _QUARTER_ROOT_TWO_PI) * np.exp(-((m - n_param) ** 2) / 4.0)


def minkowski_gaussian_overlap(l: npt.ArrayLike, spec: WavePacketSpec) -> Any:
    """(u_l, φ_±(x − x₀)) in closed form.

    (N + |l|)/(2√(|l| N √(2π))) · exp(−(l ∓ N)²/4 − i l x₀), the upper sign
    for right movers.

    >>> spec = WavePacketSpec(n_param=6.0)
    >>> round(abs(minkowski_gaussian_overlap(6.0, spec)) * (2 * math.pi) ** 0.25, 12)
    1.0

    Raises:
        DomainError: l = 0.
    """
    l = _nonzero("l", l)
    n = spec.n_param
    magnitude = (n + np.abs(l)) / (2.0 * np.sqrt(np.abs(l) * n) * _QUARTER_ROOT_TWO_PI)
    return _out(magnitude * np.exp(-((l - spec.sign * n) ** 2) / 4.0 - 1j * l * spec.center))


def packet_profile(x: npt.ArrayLike, spec: WavePacketSpec) -> npt.NDArray[np.complex128]:
    """φ_±(x − x₀) at t = 0."""
    y = np.asarray(x, dtype=np.float64) - spec.center
    norm = 1.0 / math.sqrt(spec.n_param * math.sqrt(2.0 * math.pi))
    return norm * np.exp(-(y**2) + 1j * spec.sign * spec.n_param * y)


def kg_inner_product(l: float, spec: WavePacketSpec, grid: npt.ArrayLike | None = None) -> complex:
    """Klein-Gordon inner product (u_l, φ) at t = 0 on a spatial grid.

    `(f, g) = i ∫ (f* ∂_t g − g ∂_t f*) dx` with the plane wave
    `u_l = e^{i(lx − |l|t)}/√(4π|l|)` and the packet oscillating at its
    central frequency, `∂_t φ = −iNφ`. Used as a brute force check of
    `minkowski_gaussian_overlap`.
    """
    if l == 0:
        raise DomainError("l = 0 is excluded (1/√|l| singularity)")
    if grid is None:
        grid = np.linspace(spec.center - _GRID_HALF_WIDTH, spec.center + _GRID_HALF_WIDTH, _GRID_POINTS)
    x = np.asarray(grid, dtype=np.float64)
    u_conj = np.exp(-1j * l * x) / math.sqrt(4.0 * math.pi * abs(l))
    du_conj = 1j * abs(l) * u_conj
    phi = packet_profile(x, spec)
    dphi = -1j * spec.n_param * phi
    return complex(1j * scipy_integrate.trapezoid(u_conj * dphi - phi * du_conj, x))


def mirror(spec: WavePacketSpec) -> WavePacketSpec:
    """The packet moving the other way from the same centre.

    Its Rindler spectrum at −k has the magnitude of the original at k.
    """
    return spec.copy(update={"direction": Direction(spec.direction).flipped().value})


def _log_prefactor(k: npt.NDArray[np.float64], a: float, conjugate: bool) -> npt.NDArray[np.complex128]:
    kappa = k / a
    exponent = math.pi * np.abs(k) / (2.0 * a)
    if conjugate:
        exponent = exponent - math.pi * np.abs(k) / a
    return exponent + log_gamma_array(1.0 - 1j * kappa) - 0.5 * np.log(np.abs(k)) - 1j * kappa * math.log(a)


def bogoliubov_prefactor(k: npt.ArrayLike, accel: Acceleration | float, conjugate: bool = False) -> Any:
    """The l-independent part P(k) of the coefficient.

    `bogoliubov(k, l) = P(k) (sgn k + sgn l) |l|^{−1/2} e^{i(k/a) ln|l|}`
    with `P(k) = (i/4π) e^{π|k|/2a} Γ(1 − ik/a) |k|^{−1/2} e^{−i(k/a) ln a}`.
    The exponential growth and the decay of Γ are combined in log space.
    `conjugate` includes the e^{−π|k|/a} of the conjugate coefficient.
    """
    k = _nonzero("k", k)
    a = _accel(accel)
    return _out(1j / (4.0 * math.pi) * np.exp(_log_prefactor(k, a, conjugate)))


def _coefficient(k: npt.ArrayLike, l: npt.ArrayLike, accel: Acceleration | float, conjugate: bool) -> Any:
    k = _nonzero("k", k)
    l = _nonzero("l", l)
    a = _accel(accel)
    k, l = np.broadcast_arrays(k, l)
    same = np.sign(k) == np.sign(l)
    kappa = k / a
    log_value = _log_prefactor(k, a, conjugate) - 0.5 * np.log(np.abs(l)) + 1j * kappa * np.log(np.abs(l))
    value = np.sign(k) * (1j / (2.0 * math.pi)) * np.exp(log_value)
    return _out(np.where(same, value, 0j))


def bogoliubov(k: npt.ArrayLike, l: npt.ArrayLike, accel: Acceleration | float) -> Any:
    """(w_Ik, u_l) = (i/4π) e^{πk/2a}/√|kl| (l/a)^{ik/a} (k/|k| + l/|l|) Γ(1 − ik/a).

    Exactly zero when k and l have opposite signs. For k, l < 0 the power
    is taken on the principal branch, which makes the magnitude depend on
    |k| only.

    Raises:
        DomainError: k = 0 or l = 0.
    """
    return _coefficient(k, l, accel, conjugate=False)


def bogoliubov_conjugate(k: npt.ArrayLike, l: npt.ArrayLike, accel: Acceleration | float) -> Any:
    """(w_Ik, u_l*) = e^{−π|k|/a} (w_Ik, u_l)."""
    return _coefficient(k, l, accel, conjugate=True)


def bogoliubov_norm_squared(k: npt.ArrayLike, l: npt.ArrayLike, accel: Acceleration | float) -> Any:
    """|(w_Ik, u_l)|² = 1/(2πa|l|(1 − e^{−2π|k|/a})) for sgn k = sgn l, else 0.

    Equal to e^{π|k|/a}(π|k|/a)/sinh(π|k|/a)/(4π²|kl|) without the overflow.
    """
    k = _nonzero("k", k)
    l = _nonzero("l", l)
    a = _accel(accel)
    k, l = np.broadcast_arrays(k, l)
    value = 1.0 / (2.0 * math.pi * a * np.abs(l) * -np.expm1(-2.0 * math.pi * np.abs(k) / a))
    result = np.where(np.sign(k) == np.sign(l), value, 0.0)
    return float(result) if np.ndim(result) == 0 else result
