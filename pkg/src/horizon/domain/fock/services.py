"""Brute force moments of Rob's quadratures in a truncated two-mode Fock space.

The perpendicular part of Rob's mode is not represented. Subtracting the
vacuum moments leaves exactly the excitation dependent blocks of the
covariance matrices, which is what `verify_covariance_blocks` compares.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np
from scipy import sparse

from horizon.domain.gaussian.services import covariance_entangled, covariance_separable, cross_block, local_block
from horizon.lib import settings
from horizon.lib.exceptions import DomainError, OracleMismatchError, TruncationError
from horizon.lib.log import get_logger

from .schemas import BlockReport, ModeCoefficients, OracleSuiteReport, StateKind, TruncatedState

if TYPE_CHECKING:
    from collections.abc import Iterable

    import numpy.typing as npt

__all__ = [
    "build_state",
    "ladder_operators",
    "required_cutoff",
    "run_oracle_suite",
    "sector_moments",
    "verify_covariance_blocks",
]

logger = get_logger()

_SQRT2 = math.sqrt(2.0)


def required_cutoff(s: float, tol: float | None = None) -> int:
    """Smallest cutoff C with discarded single-mode weight tanh^(2(C+1)) s <= tol.

    >>> required_cutoff(0.0)
    1
    """
    tol = settings.oracle.TRUNCATION_TOL if tol is None else tol
    if s < 0:
        raise DomainError(f"squeezing must be non-negative, got s = {s!r}")
    t = math.tanh(s)
    if t == 0.0:
        return 1
    if t >= 1.0:
        raise TruncationError(f"s = {s!r} is too large to truncate")
    return max(1, math.ceil(math.log(tol) / (2.0 * math.log(t))) - 1)


@lru_cache(maxsize=8)
def ladder_operators(dim: int) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """Annihilation operators `a ⊗ 1` and `1 ⊗ b` on `dim` levels per mode."""
    single = sparse.diags(np.sqrt(np.arange(1, dim, dtype=np.float64)), offsets=1, format="csr")
    eye = sparse.identity(dim, format="csr")
    return sparse.kron(single, eye, format="csr"), sparse.kron(eye, single, format="csr")


def build_state(
    kind: StateKind | str,
    s: float,
    cutoff: int,
    tol: float | None = None,
    amplitude_sign: int | None = None,
) -> TruncatedState:
    """Truncated two-mode squeezed vacuum, thermal product or vacuum.

    The squeezed state is `Σ (ε tanh s)^n / cosh s |n, n⟩` with ε =
    `amplitude_sign`, by default TMSS_AMPLITUDE_SIGN; each thermal mode
    has populations `tanh^(2n) s / cosh² s`. Amplitudes are not renormalized,
    so `state.leakage` is the truncated weight.

    Raises:
        DomainError: s < 0.
        TruncationError: cutoff < 1, or too small for `tol` at this s; the
            message names the required cutoff.
    """
    kind = StateKind(kind)
    eps = settings.gaussian.TMSS_AMPLITUDE_SIGN if amplitude_sign is None else amplitude_sign
    if eps not in (1, -1):
        raise DomainError(f"amplitude sign must be 1 or -1, got {eps!r}")
    if s < 0:
        raise DomainError(f"squeezing must be non-negative, got s = {s!r}")
    if cutoff < 1:
        raise TruncationError(f"cutoff must be at least 1, got {cutoff}", required_cutoff=1)
    if kind is StateKind.VACUUM:
        s = 0.0
    needed = required_cutoff(s, tol)
    if cutoff < needed:
        raise TruncationError(f"cutoff {cutoff} too small at s = {s}", required_cutoff=needed)

    dim = cutoff + 2
    n = np.arange(cutoff + 1)
    t = math.tanh(s)
    if kind is StateKind.THERMAL_PRODUCT:
        single = np.zeros(dim)
        single[: cutoff + 1] = t ** (2 * n) / math.cosh(s) ** 2
        return TruncatedState(kind=kind, s=s, cutoff=cutoff, populations=np.outer(single, single).ravel())
    amplitudes = np.zeros(dim * dim, dtype=np.complex128)
    amplitudes[n * dim + n] = (eps * t) ** n / math.cosh(s)
    return TruncatedState(kind=kind, s=s, cutoff=cutoff, amplitudes=amplitudes, amplitude_sign=eps)


def _quadratures(dim: int, coeffs: ModeCoefficients) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    a, b = ladder_operators(dim)
    d = (
        complex(coeffs.alpha) * a
        + complex(coeffs.alpha_prime) * a.conj().T
        + complex(coeffs.beta) * b
        + complex(coeffs.beta_prime) * b.conj().T
    )
    d_dag = d.conj().T
    return ((d + d_dag) / _SQRT2).tocsr(), ((d - d_dag) / (_SQRT2 * 1j)).tocsr()


def sector_moments(state: TruncatedState, coeffs: ModeCoefficients) -> npt.NDArray[np.float64]:
    """M_ij = ⟨X_i X_j + X_j X_i⟩ for the quadratures of `αa + α′a† + βb + β′b†`.

    Both quadratures are hermitian, so `⟨X_i X_j + X_j X_i⟩ = 2 Re ⟨X_i ψ, X_j ψ⟩`.

    Raises:
        TruncationError: the state has lost more than LEAKAGE_TOL of its norm.
    """
    if state.leakage > settings.oracle.LEAKAGE_TOL:
        raise TruncationError(f"norm leakage {state.leakage:.3e} at cutoff {state.cutoff}")
    xs = _quadratures(state.dim, coeffs)
    moments = np.empty((2, 2))
    if state.amplitudes is not None:
        vectors = [x @ state.amplitudes for x in xs]
        for i in range(2):
            for j in range(i, 2):
                moments[i, j] = moments[j, i] = 2.0 * np.vdot(vectors[i], vectors[j]).real
    else:
        populations = np.asarray(state.populations)
        for i in range(2):
            for j in range(i, 2):
                diagonal = (xs[i].conj().T @ xs[j]).diagonal()
                moments[i, j] = moments[j, i] = 2.0 * float(populations @ diagonal.real)
    return moments / state.norm


def _max_abs(matrix: npt.NDArray[np.float64]) -> float:
    return float(np.max(np.abs(matrix)))


def verify_covariance_blocks(
    coeffs: ModeCoefficients,
    s: float,
    cutoff: int | None = None,
    amplitude_sign: int | None = None,
) -> BlockReport:
    """Compare the closed-form covariance blocks with truncated Fock moments.

    The cutoff is raised until the discarded weight is below
    VERIFY_TRUNCATION_TOL. The separable block has no sign freedom; for the
    entangled one the sign of `cross_block` is chosen by the
    moments of the squeezed state with amplitude sign `amplitude_sign`
    (default TMSS_AMPLITUDE_SIGN) and reported. The covariance assembly
    itself is checked at the configured CROSS_BLOCK_SIGN.

    Raises:
        DomainError: s outside [0, ORACLE_MAX_SQUEEZING].
        TruncationError: the needed cutoff exceeds MAX_CUTOFF.
        OracleMismatchError: any entry disagrees by more than MATCH_TOL.
    """
    if not 0.0 <= s <= settings.oracle.MAX_SQUEEZING:
        raise DomainError(f"block verification needs 0 <= s <= {settings.oracle.MAX_SQUEEZING}, got {s!r}")
    cutoff = max(cutoff or settings.oracle.CUTOFF, required_cutoff(s, settings.oracle.VERIFY_TRUNCATION_TOL))
    if cutoff > settings.oracle.MAX_CUTOFF:
        raise TruncationError(f"s = {s} needs more than {settings.oracle.MAX_CUTOFF} photons", required_cutoff=cutoff)
    tol = settings.oracle.MATCH_TOL
    tol_build = settings.oracle.VERIFY_TRUNCATION_TOL

    vacuum = sector_moments(build_state(StateKind.VACUUM, 0.0, cutoff), coeffs)
    thermal = sector_moments(build_state(StateKind.THERMAL_PRODUCT, s, cutoff, tol_build), coeffs) - vacuum
    squeezed = build_state(StateKind.TMSS, s, cutoff, tol_build, amplitude_sign)
    tmss = sector_moments(squeezed, coeffs) - vacuum

    local = local_block(coeffs)
    expected_local = 2.0 * math.sinh(s) ** 2 * local
    cross = 2.0 * math.sinh(2.0 * s) * cross_block(coeffs)
    residuals = {sign: _max_abs(tmss - expected_local - sign * cross) for sign in (1, -1)}
    cross_magnitude = _max_abs(cross)
    cross_sign: int | None = min(residuals, key=residuals.__getitem__) if cross_magnitude > tol else None

    ov = coeffs.as_overlaps()
    eye = np.eye(2)
    assembly_residual = max(
        _max_abs(covariance_entangled(ov, s).as_array() - eye - tmss),
        _max_abs(covariance_separable(ov, s).as_array() - eye - thermal),
    )
    report = BlockReport(
        s=s,
        cutoff=cutoff,
        amplitude_sign=squeezed.amplitude_sign,
        separable_residual=_max_abs(thermal - expected_local),
        entangled_residual=min(residuals.values()),
        assembly_residual=assembly_residual,
        vacuum_residual=_max_abs(vacuum - local),
        cross_sign=cross_sign,
        cross_magnitude=cross_magnitude,
        entries={
            "vacuum": vacuum.tolist(),
            "thermal_minus_vacuum": thermal.tolist(),
            "tmss_minus_vacuum": tmss.tolist(),
            "local_block": expected_local.tolist(),
            "cross_block": cross.tolist(),
        },
    )
    if report.max_residual > tol:
        logger.error("Covariance block mismatch", s=s, cutoff=cutoff, residual=report.max_residual)
        raise OracleMismatchError(
            f"covariance blocks disagree with Fock moments at s = {s}: residual {report.max_residual:.3e}",
            diagnostics=report.dict(),
        )
    return report


def run_oracle_suite(
    s_values: Iterable[float] | None = None,
    draws: int | None = None,
    seed: int | None = None,
    cutoff: int | None = None,
    amplitude_sign: int | None = None,
) -> OracleSuiteReport:
    """Random coefficient campaign; the resolved cross sign must be draw independent.

    Raises:
        OracleMismatchError: a block disagrees, the draws resolve different
            signs, or the resolved sign differs from CROSS_BLOCK_SIGN.
    """
    s_values = list(settings.oracle.SQUEEZING_VALUES if s_values is None else s_values)
    draws = settings.oracle.DRAWS if draws is None else draws
    rng = np.random.default_rng(settings.oracle.SEED if seed is None else seed)
    reports = [
        verify_covariance_blocks(ModeCoefficients.random(rng), s, cutoff, amplitude_sign)
        for s in s_values
        for _ in range(draws)
    ]
    signs = {r.cross_sign for r in reports if r.cross_sign is not None}
    configured = settings.gaussian.CROSS_BLOCK_SIGN
    suite = OracleSuiteReport(
        cross_sign=next(iter(signs)) if len(signs) == 1 else None,
        configured_sign=configured,
        amplitude_sign=settings.gaussian.TMSS_AMPLITUDE_SIGN if amplitude_sign is None else amplitude_sign,
        draws=len(reports),
        cutoff=max((r.cutoff for r in reports), default=cutoff or settings.oracle.CUTOFF),
        max_residual=max((r.max_residual for r in reports), default=0.0),
        reports=reports,
    )
    if len(signs) > 1 or (suite.cross_sign is not None and not suite.sign_agrees):
        raise OracleMismatchError(
            f"cross block sign not resolved consistently: resolved {sorted(signs)}, "
            f"configured {configured}",
            diagnostics=suite.dict(exclude={"reports"}),
        )
    logger.info(
        "Fock oracle passed",
        cross_sign=suite.cross_sign,
        amplitude_sign=suite.amplitude_sign,
        draws=suite.draws,
        max_residual=suite.max_residual,
    )
    return suite
