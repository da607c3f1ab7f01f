"""Covariance matrices of both scenarios and the discrimination figures of merit.

Rob's quadratures are `x = (d + d†)/√2` and `p = (d − d†)/(√2 i)` with
`σ_ij = ⟨X_i X_j + X_j X_i⟩`, so the vacuum is the identity. With
`D = αa + α′a† + βb + β′b†` the excitation dependent parts are

    σ   = (1 + 2n_U) I + 2 sinh²s L + 2 sinh 2s K
    σ_s = (1 + 2n_U) I + 2 sinh²s L

where `L` is `local_block` and `K` the cross block times the configured
sign.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from horizon.lib import settings
from horizon.lib.exceptions import ConvergenceError, DomainError, UnphysicalStateError
from horizon.lib.log import get_logger

from .schemas import CovarianceMatrix, DiscriminationResult, SqueezingParam

if TYPE_CHECKING:
    import numpy.typing as npt

    from horizon.domain.overlaps.schemas import OverlapSet

    from .schemas import ModeOverlaps

__all__ = [
    "covariance_entangled",
    "covariance_separable",
    "cross_block",
    "discriminate",
    "error_bounds",
    "fidelity",
    "local_block",
]

logger = get_logger()


def _coefficients(ov: ModeOverlaps) -> tuple[complex, complex, complex, complex]:
    return complex(ov.alpha), complex(ov.alpha_prime), complex(ov.beta), complex(ov.beta_prime)


def _squeezing(s: SqueezingParam | float) -> float:
    value = float(s)
    if not 0.0 <= value <= settings.gaussian.MAX_SQUEEZING:
        raise DomainError(f"squeezing s = {value!r} outside [0, {settings.gaussian.MAX_SQUEEZING}]")
    return value


def local_block(ov: ModeOverlaps) -> npt.NDArray[np.float64]:
    """The matrix multiplying 2 sinh²s; also the vacuum moments of the a, b sector.

    >>> from horizon.domain.overlaps.schemas import OverlapSet
    >>> local_block(OverlapSet.inertial_limit()).tolist()
    [[1.0, 0.0], [0.0, 1.0]]
    """
    alpha, alpha_p, beta, beta_p = _coefficients(ov)
    p = alpha + alpha_p.conjugate()
    q = beta + beta_p.conjugate()
    r = alpha - alpha_p.conjugate()
    t = beta - beta_p.conjugate()
    off = 2.0 * (alpha * alpha_p + beta * beta_p).imag
    return np.array([[abs(p) ** 2 + abs(q) ** 2, off], [off, abs(r) ** 2 + abs(t) ** 2]])


def cross_block(ov: ModeOverlaps) -> npt.NDArray[np.float64]:
    """The matrix multiplying ±2 sinh 2s, written with leading minus signs.

    Vanishes when Rob's mode has no overlap with Alice's (α = α′ = 0).
    """
    alpha, alpha_p, beta, beta_p = _coefficients(ov)
    p = alpha + alpha_p.conjugate()
    q = beta + beta_p.conjugate()
    r = alpha - alpha_p.conjugate()
    t = beta - beta_p.conjugate()
    off = -(alpha * beta + alpha_p * beta_p).imag
    return np.array([[-(p * q).real, off], [off, (r * t).real]])


def _refuse_unconverged(ov: OverlapSet) -> None:
    if not ov.converged:
        failed = sorted(name for name, ok in ov.convergence.items() if not ok)
        raise ConvergenceError(f"overlaps at a = {ov.accel!r} did not converge: {', '.join(failed)}")


def _separable(ov: OverlapSet, s: float) -> npt.NDArray[np.float64]:
    return (1.0 + 2.0 * ov.n_unruh) * np.eye(2) + 2.0 * math.sinh(s) ** 2 * local_block(ov)


def covariance_separable(ov: OverlapSet, s: SqueezingParam | float) -> CovarianceMatrix:
    """Rob's covariance when Alice and Bob share a thermal product state.

    Raises:
        ConvergenceError: `ov` is not converged.
        DomainError: `s` outside [0, MAX_SQUEEZING].
    """
    _refuse_unconverged(ov)
    return CovarianceMatrix.from_array(_separable(ov, _squeezing(s)))


def covariance_entangled(
    ov: OverlapSet,
    s: SqueezingParam | float,
    cross_sign: int | None = None,
) -> CovarianceMatrix:
    """Rob's covariance when Alice and Bob share the two-mode squeezed state.

    Args:
        ov: Converged overlaps.
        s: Squeezing.
        cross_sign: Multiplies `cross_block`, defaults to
            `settings.gaussian.CROSS_BLOCK_SIGN`.

    Raises:
        ConvergenceError: `ov` is not converged.
        DomainError: `s` outside [0, MAX_SQUEEZING].
    """
    _refuse_unconverged(ov)
    value = _squeezing(s)
    sign = settings.gaussian.CROSS_BLOCK_SIGN if cross_sign is None else cross_sign
    matrix = _separable(ov, value) + sign * 2.0 * math.sinh(2.0 * value) * cross_block(ov)
    return CovarianceMatrix.from_array(matrix)


def _check_physical(sigma: CovarianceMatrix) -> float:
    det = sigma.determinant
    if det < 1.0 - settings.gaussian.UNPHYSICAL_TOL:
        raise UnphysicalStateError(det)
    return det


def _fidelity_terms(sig: CovarianceMatrix, sig_s: CovarianceMatrix) -> tuple[float, float, float]:
    det = _check_physical(sig)
    det_s = _check_physical(sig_s)
    delta_sum = (sig + sig_s).determinant
    delta_prod = (det - 1.0) * (det_s - 1.0)
    if delta_prod < 0.0:
        logger.debug("Clamping negative determinant product", delta=delta_prod)
        delta_prod = 0.0
    # 2/(√(Δ+δ) − √δ) without the cancellation
    value = 2.0 * (math.sqrt(delta_sum + delta_prod) + math.sqrt(delta_prod)) / delta_sum
    return value, delta_sum, delta_prod


def fidelity(sig: CovarianceMatrix, sig_s: CovarianceMatrix) -> float:
    """Fidelity of two zero-mean single-mode Gaussian states.

    >>> fidelity(CovarianceMatrix(s11=1, s12=0, s22=1), CovarianceMatrix(s11=3, s12=0, s22=3))
    0.5

    Raises:
        UnphysicalStateError: either determinant is below 1 − UNPHYSICAL_TOL.
    """
    return _fidelity_terms(sig, sig_s)[0]


def error_bounds(value: float) -> tuple[float, float]:
    """Lower and upper bounds on the minimum error probability.

    >>> error_bounds(1.0)
    (0.5, 0.5)

    Raises:
        DomainError: `value` outside [0, 1] by more than FIDELITY_CLAMP_TOL.
    """
    tol = settings.gaussian.FIDELITY_CLAMP_TOL
    if not -tol <= value <= 1.0 + tol:
        raise DomainError(f"fidelity {value!r} outside [0, 1]")
    value = min(max(value, 0.0), 1.0)
    return 0.5 * (1.0 - math.sqrt(1.0 - value)), 0.5 * math.sqrt(value)


def discriminate(
    ov: OverlapSet,
    s: SqueezingParam | float,
    cross_sign: int | None = None,
) -> tuple[CovarianceMatrix, CovarianceMatrix, DiscriminationResult]:
    """Both covariance matrices and the fidelity bounds at one squeezing."""
    sigma = covariance_entangled(ov, s, cross_sign)
    sigma_s = covariance_separable(ov, s)
    value, delta_sum, delta_prod = _fidelity_terms(sigma, sigma_s)
    clamped = min(value, 1.0) if value <= 1.0 + settings.gaussian.FIDELITY_CLAMP_TOL else value
    f_minus, f_plus = error_bounds(clamped)
    result = DiscriminationResult(
        fidelity=clamped,
        f_minus=f_minus,
        f_plus=f_plus,
        det_sum=delta_sum,
        det_prod_term=delta_prod,
    )
    return sigma, sigma_s, result
