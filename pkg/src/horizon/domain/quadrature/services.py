"""Vectorized adaptive Gauss-Kronrod quadrature.

Every integral is a set of panels evaluated with the 15 point Kronrod rule
and its embedded 7 point Gauss rule; `|K15 - G7|` is the panel error.
Panels whose error exceeds their share of the tolerance are bisected until
the total error meets the target or the evaluation budget runs out.
Integrands are called with a 1-d array of abscissae and must return an
array of the same shape.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from horizon.lib import settings
from horizon.lib.exceptions import DomainError, IntegrandEvaluationError
from horizon.lib.log import get_logger
from horizon.lib.schema import ComplexValue

from .schemas import QuadratureConfig, QuadratureResult

if TYPE_CHECKING:
    from collections.abc import Callable

    import numpy.typing as npt

    Integrand = Callable[[npt.NDArray[np.float64]], npt.ArrayLike]

__all__ = [
    "gauss_kronrod_panels",
    "integrate",
    "integrate_log_oscillatory",
    "integrate_panels",
    "integrate_to_infinity",
]

logger = get_logger()

_KRONROD_X = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ],
)
_KRONROD_W = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ],
)
_GAUSS_W = np.array(
    [
        0.0,
        0.129484966168869693270611432679082,
        0.0,
        0.279705391489276667901467771423780,
        0.0,
        0.381830050505118944950369775488975,
        0.0,
        0.417959183673469387755102040816327,
    ],
)
NODES = np.concatenate([-_KRONROD_X[:-1], _KRONROD_X[::-1]])
KRONROD_WEIGHTS = np.concatenate([_KRONROD_W[:-1], _KRONROD_W[::-1]])
GAUSS_WEIGHTS = np.concatenate([_GAUSS_W[:-1], _GAUSS_W[::-1]])
POINTS_PER_PANEL = NODES.size

_DENSE_SAMPLES = 257


def _evaluate(f: Integrand, x: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
    values = np.asarray(f(x.ravel()), dtype=np.complex128).reshape(x.shape)
    finite = np.isfinite(values)
    if not finite.all():
        idx = np.unravel_index(np.argmin(finite), x.shape)
        raise IntegrandEvaluationError(float(x[idx]), complex(values[idx]))
    return values


def gauss_kronrod_panels(
    f: Integrand,
    lo: npt.NDArray[np.float64],
    hi: npt.NDArray[np.float64],
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.float64]]:
    """Apply the 15 point rule to every panel `[lo[i], hi[i]]`.

    Returns:
        Kronrod estimates and `|K15 - G7|` per panel.
    """
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = _evaluate(f, x)
    kronrod = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    return kronrod, np.abs(kronrod - gauss)


def _ordered_sum(values: npt.NDArray[np.complex128]) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def integrate_panels(
    f: Integrand,
    edges: npt.ArrayLike,
    cfg: QuadratureConfig | None = None,
) -> QuadratureResult:
    """Adaptive integration over consecutive panels.

    Args:
        f: Vectorized integrand.
        edges: Increasing panel boundaries, at least two.
        cfg: Tolerances and evaluation budget.

    Returns:
        The integral over `[edges[0], edges[-1]]`. Panels are summed in
        position order, so the result does not depend on refinement order.
    """
    cfg = cfg or QuadratureConfig()
    edge_array = np.asarray(edges, dtype=np.float64)
    lo, hi = edge_array[:-1].copy(), edge_array[1:].copy()
    width = float(hi[-1] - lo[0])
    if lo.size * POINTS_PER_PANEL > cfg.max_evaluations:
        return QuadratureResult(
            value=ComplexValue(re=0.0, im=0.0),
            error_estimate=0.0,
            evaluations=0,
            converged=False,
            diagnostic=f"{lo.size} initial panels exceed the budget of {cfg.max_evaluations} evaluations",
        )
    values, errors = gauss_kronrod_panels(f, lo, hi)
    evaluations = lo.size * POINTS_PER_PANEL
    while True:
        total = _ordered_sum(values)
        error = math.fsum(errors)
        target = cfg.tolerance(total)
        if error <= target:
            return QuadratureResult(
                value=ComplexValue.from_complex(total),
                error_estimate=error,
                evaluations=evaluations,
                converged=True,
            )
        split = errors > target * (hi - lo) / width
        if not split.any():
            split = errors >= errors.max()
        cost = 2 * POINTS_PER_PANEL * int(split.sum())
        if evaluations + cost > cfg.max_evaluations:
            return QuadratureResult(
                value=ComplexValue.from_complex(total),
                error_estimate=error,
                evaluations=evaluations,
                converged=False,
                diagnostic=f"evaluation budget of {cfg.max_evaluations} exhausted",
            )
        mid = 0.5 * (lo[split] + hi[split])
        reps = np.where(split, 2, 1)
        first = (np.cumsum(reps) - reps)[split]
        lo, hi = np.repeat(lo, reps), np.repeat(hi, reps)
        values, errors = np.repeat(values, reps), np.repeat(errors, reps)
        hi[first] = mid
        lo[first + 1] = mid
        new_lo = np.concatenate([lo[first], lo[first + 1]])
        new_hi = np.concatenate([hi[first], hi[first + 1]])
        new_values, new_errors = gauss_kronrod_panels(f, new_lo, new_hi)
        n = first.size
        values[first], values[first + 1] = new_values[:n], new_values[n:]
        errors[first], errors[first + 1] = new_errors[:n], new_errors[n:]
        evaluations += cost


def _check_interval(lo: float, hi: float) -> None:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"integration limits must be finite, got [{lo!r}, {hi!r}]")
    if lo > hi:
        raise DomainError(f"lower limit {lo!r} exceeds upper limit {hi!r}")


def _zero() -> QuadratureResult:
    return QuadratureResult(value=ComplexValue(re=0.0, im=0.0), error_estimate=0.0, evaluations=0, converged=True)


def integrate(f: Integrand, lo: float, hi: float, cfg: QuadratureConfig | None = None) -> QuadratureResult:
    """∫ f(x) dx over `[lo, hi]`.

    Raises:
        DomainError: the interval is reversed or unbounded.
        IntegrandEvaluationError: `f` returned NaN or infinity.
    """
    _check_interval(lo, hi)
    if lo == hi:
        return _zero()
    return integrate_panels(f, [lo, hi], cfg)


def integrate_to_infinity(f: Integrand, lo: float, cfg: QuadratureConfig | None = None) -> QuadratureResult:
    """∫ f(x) dx over `[lo, ∞)`.

    The half-line is mapped onto `[0, 1)` by `x = lo + t/(1 − t)`. Initial
    panels halve towards `t = 1`. The integrand is sampled at
    `x = lo + 2**j − 1`; `|f(x)|·(x − lo + 1)` at the farthest sample bounds
    the unsampled tail and is added to the error estimate. A tail that does
    not decay clears `converged`.
    """
    cfg = cfg or QuadratureConfig()
    if not math.isfinite(lo):
        raise DomainError(f"lower limit must be finite, got {lo!r}")

    def mapped(t: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
        one_minus = 1.0 - t
        return np.asarray(f(lo + t / one_minus), dtype=np.complex128) / one_minus**2

    depth = 8
    edges = np.concatenate([[0.0], 1.0 - 0.5 ** np.arange(1, depth + 1), [1.0]])
    result = integrate_panels(mapped, edges, cfg)

    exponents = np.arange(1, settings.quad.TAIL_SAMPLE_EXPONENT + 1, dtype=np.float64)
    scale = 2.0**exponents
    samples = np.abs(_evaluate(f, lo + scale - 1.0)) * scale
    tail = float(samples[-1])
    diagnostic = result.diagnostic
    converged = result.converged
    if tail > cfg.tolerance(result.complex_value):
        converged = False
        diagnostic = f"integrand does not decay: |f(x)|·x = {tail:.3e} at x = {lo + scale[-1] - 1.0:.3e}"
        logger.warning("Non-decaying tail", lo=lo, tail=tail)
    return QuadratureResult(
        value=result.value,
        error_estimate=result.error_estimate + tail,
        evaluations=result.evaluations + samples.size,
        converged=converged,
        diagnostic=diagnostic,
    )


def _phase_edges(
    kappa: float,
    omega: float,
    lo: float,
    hi: float,
    cfg: QuadratureConfig,
) -> npt.NDArray[np.float64]:
    """Panel edges at equal increments of the phase `κ ln m + ω m` on a monotone segment."""

    def phase(m: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return kappa * np.log(m) + omega * m

    swing = abs(float(phase(np.array([hi]))[0] - phase(np.array([lo]))[0]))
    panels = max(cfg.min_panels, math.ceil(swing / (2.0 * math.pi) * cfg.oscillation_panels_per_period))
    samples = 4 * panels + _DENSE_SAMPLES
    grid = np.unique(
        np.concatenate([np.geomspace(lo, hi, samples), np.linspace(lo, hi, samples)]),
    )
    psi = phase(grid)
    if psi[-1] < psi[0]:
        psi = -psi
    psi = np.maximum.accumulate(psi)
    targets = np.linspace(psi[0], psi[-1], panels + 1)
    edges = np.interp(targets, psi, grid)
    edges[0], edges[-1] = lo, hi
    return np.unique(edges)


def integrate_log_oscillatory(
    g: Integrand,
    kappa: float,
    lo: float,
    hi: float,
    cfg: QuadratureConfig | None = None,
    omega: float = 0.0,
) -> QuadratureResult:
    """∫ g(m)·e^{i(κ ln m + ω m)} dm over `[lo, hi]`, `lo > 0`.

    The phase is monotone on either side of its stationary point
    `m* = −κ/ω`. Each monotone segment is cut into panels of equal phase
    increment, `oscillation_panels_per_period` per period, so the panel
    count grows with `|κ| ln(hi/lo) + |ω|(hi − lo)` and not with the
    sampling needed to resolve every oscillation pointwise. The panels are
    then refined adaptively.

    Raises:
        DomainError: `lo <= 0`, where the logarithmic phase is undefined.
    """
    cfg = cfg or QuadratureConfig()
    if not lo > 0:
        raise DomainError(f"logarithmic phase needs lo > 0, got lo = {lo!r}")
    _check_interval(lo, hi)
    if kappa == 0 and omega == 0:
        return integrate(g, lo, hi, cfg)
    if lo == hi:
        return _zero()

    def integrand(m: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
        return np.asarray(g(m), dtype=np.complex128) * np.exp(1j * (kappa * np.log(m) + omega * m))

    breaks = [lo, hi]
    if omega != 0 and lo < -kappa / omega < hi:
        breaks.insert(1, -kappa / omega)
    edges = np.concatenate(
        [_phase_edges(kappa, omega, a, b, cfg)[:-1] for a, b in zip(breaks[:-1], breaks[1:], strict=True)] + [[hi]],
    )
    return integrate_panels(integrand, edges, cfg)
