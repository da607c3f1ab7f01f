"""Checks of every numerical layer against closed forms or brute force."""
from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate as scipy_integrate

from horizon import utils
from horizon.domain.fock.services import run_oracle_suite
from horizon.domain.modes.schemas import Direction, WavePacketSpec
from horizon.domain.modes.services import (
    bogoliubov,
    bogoliubov_norm_squared,
    kg_inner_product,
    minkowski_gaussian_overlap,
)
from horizon.domain.quadrature.schemas import QuadratureConfig
from horizon.domain.quadrature.services import integrate, integrate_log_oscillatory, integrate_to_infinity
from horizon.domain.specfun.services import log_gamma, rindler_squeezing, unruh_occupation
from horizon.lib import settings
from horizon.lib.exceptions import OracleMismatchError
from horizon.lib.log import get_logger

from .schemas import CheckResult, ValidationReport

if TYPE_CHECKING:
    from collections.abc import Callable

    import numpy.typing as npt

    from horizon.domain.quadrature.schemas import QuadratureResult

__all__ = [
    "check_bogoliubov",
    "check_error_estimates",
    "check_fock_oracle",
    "check_gamma_identity",
    "check_packet_overlaps",
    "check_quadrature",
    "check_spectrum_integrands",
    "check_squeezing_identity",
    "run_validation",
]

logger = get_logger()

IDENTITY_TOL = 1e-10
QUADRATURE_TOL = 1e-8
KG_TOL = 1e-6
SPECTRUM_TOL = 1e-9
ROUNDOFF_TOL = 1e-12
SPECTRUM_DRAWS = 5
SPECTRUM_SEED = 20240611
SPECTRUM_WINDOW = (0.5, 20.0)
DENSE_POINTS = 2_000_001
_GRID = (1e-2, 1e2, 41)


def _result(name: str, errors: list[float], tolerance: float, **detail: object) -> CheckResult:
    worst = max(errors, default=0.0)
    return CheckResult(name=name, passed=worst <= tolerance, max_error=worst, tolerance=tolerance, detail=detail)


def check_gamma_identity() -> CheckResult:
    """|Γ(1 + iy)|² = πy / sinh(πy) on a log grid of y."""
    errors = []
    for y in utils.geometric_grid(*_GRID):
        lhs = math.exp(2.0 * log_gamma(complex(1.0, y)).re)
        rhs = math.pi * y / math.sinh(math.pi * y)
        errors.append(abs(lhs / rhs - 1.0))
    return _result("gamma |Γ(1+iy)|²", errors, IDENTITY_TOL)


def check_squeezing_identity() -> CheckResult:
    """sinh²(r_Ω) equals the Bose-Einstein occupation on a log grid of Ω."""
    errors = [
        abs(math.sinh(rindler_squeezing(omega)) ** 2 / unruh_occupation(omega) - 1.0)
        for omega in utils.geometric_grid(*_GRID)
    ]
    return _result("squeezing sinh²r = n(Ω)", errors, IDENTITY_TOL)


def _linear_phase_antiderivative(m: float, omega: float) -> complex:
    """Antiderivative of m e^{iωm}."""
    return complex(np.exp(1j * omega * m) * (m / (1j * omega) + 1.0 / omega**2))


def _closed_forms() -> list[tuple[str, Callable[[QuadratureConfig], QuadratureResult], complex]]:
    forms: list[tuple[str, Callable[[QuadratureConfig], QuadratureResult], complex]] = [
        ("x² on [0, 1]", lambda c: integrate(lambda x: x**2, 0.0, 1.0, c), 1.0 / 3.0),
        ("sin on [0, π]", lambda c: integrate(np.sin, 0.0, math.pi, c), 2.0),
        ("1/(1+x²) on [0, 1]", lambda c: integrate(lambda x: 1.0 / (1.0 + x**2), 0.0, 1.0, c), math.pi / 4.0),
        ("e^-x on [0, ∞)", lambda c: integrate_to_infinity(lambda x: np.exp(-x), 0.0, c), 1.0),
        ("e^-x² on [0, ∞)", lambda c: integrate_to_infinity(lambda x: np.exp(-(x**2)), 0.0, c), math.sqrt(math.pi) / 2.0),
        ("1/(1+x)² on [0, ∞)", lambda c: integrate_to_infinity(lambda x: 1.0 / (1.0 + x) ** 2, 0.0, c), 1.0),
        (
            "e^{iωm} on [1, 3], ω = 40",
            lambda c: integrate_log_oscillatory(np.ones_like, 0.0, 1.0, 3.0, c, omega=40.0),
            (np.exp(120j) - np.exp(40j)) / 40j,
        ),
        ("√x on [0, 1]", lambda c: integrate(np.sqrt, 0.0, 1.0, c), 2.0 / 3.0),
        ("cos² on [0, 2π]", lambda c: integrate(lambda x: np.cos(x) ** 2, 0.0, 2.0 * math.pi, c), math.pi),
        (
            "e^-(x-6)²/2 on [0, 12]",
            lambda c: integrate(lambda x: np.exp(-((x - 6.0) ** 2) / 2.0), 0.0, 12.0, c),
            math.sqrt(2.0 * math.pi) * math.erf(6.0 / math.sqrt(2.0)),
        ),
        ("x e^-x on [0, ∞)", lambda c: integrate_to_infinity(lambda x: x * np.exp(-x), 0.0, c), 1.0),
        ("1/(1+x²) on [0, ∞)", lambda c: integrate_to_infinity(lambda x: 1.0 / (1.0 + x**2), 0.0, c), math.pi / 2.0),
        (
            "m e^{iωm} on [1, 2], ω = 25",
            lambda c: integrate_log_oscillatory(lambda m: m, 0.0, 1.0, 2.0, c, omega=25.0),
            complex(_linear_phase_antiderivative(2.0, 25.0) - _linear_phase_antiderivative(1.0, 25.0)),
        ),
    ]
    for kappa in (1.0, 10.0, 50.0, 200.0):
        forms.append(
            (
                f"m^(iκ)/m on [1, e], κ = {kappa:g}",
                lambda c, k=kappa: integrate_log_oscillatory(np.reciprocal, k, 1.0, math.e, c),
                (np.exp(1j * kappa) - 1.0) / (1j * kappa),
            ),
        )
        forms.append(
            (
                f"m^(iκ) on [1, e²], κ = {kappa:g}",
                lambda c, k=kappa: integrate_log_oscillatory(np.ones_like, k, 1.0, math.e**2, c),
                (math.e ** (2.0 * (1.0 + 1j * kappa)) - 1.0) / (1.0 + 1j * kappa),
            ),
        )
    return forms


def check_quadrature() -> CheckResult:
    """Closed-form integrals at rel_tol 1e-10, compared to within 1e-8."""
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-14)
    errors = {}
    unconverged = []
    for name, run, exact in _closed_forms():
        result = run(cfg)
        errors[name] = abs(result.complex_value - complex(exact)) / max(1.0, abs(exact))
        if not result.converged:
            unconverged.append(name)
    check = _result("quadrature closed forms", list(errors.values()), QUADRATURE_TOL, unconverged=unconverged)
    if unconverged:
        check.passed = False
    return check


def _spectrum_integrands(
    draws: int = SPECTRUM_DRAWS,
    seed: int = SPECTRUM_SEED,
) -> list[tuple[str, Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]], float, float]]:
    """Random Gaussian envelopes over √m with log and linear phases, like the Rindler spectra."""
    rng = np.random.default_rng(seed)
    integrands = []
    for _ in range(draws):
        center, width = rng.uniform(4.0, 10.0), rng.uniform(0.8, 2.0)
        kappa, omega = rng.uniform(-50.0, 50.0), rng.uniform(-20.0, 20.0)

        def envelope(m: npt.NDArray[np.float64], c: float = center, w: float = width) -> npt.NDArray[np.float64]:
            return np.exp(-((m - c) ** 2) / (2.0 * w**2)) / np.sqrt(m)

        name = f"N={center:.2f}, w={width:.2f}, κ={kappa:.2f}, ω={omega:.2f}"
        integrands.append((name, envelope, kappa, omega))
    return integrands


def _dense_reference(
    g: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]],
    kappa: float,
    omega: float,
) -> tuple[complex, float]:
    """Simpson's rule on a dense grid; returns the integral and ∫|g|."""
    m = np.linspace(*SPECTRUM_WINDOW, DENSE_POINTS)
    envelope = g(m)
    values = envelope * np.exp(1j * (kappa * np.log(m) + omega * m))
    integral = complex(scipy_integrate.simpson(values.real, x=m), scipy_integrate.simpson(values.imag, x=m))
    return integral, float(scipy_integrate.simpson(np.abs(envelope), x=m))


def check_spectrum_integrands() -> CheckResult:
    """The oscillatory path against a dense Simpson grid on random spectrum-shaped integrands.

    Errors are relative to ∫|g|, since heavy cancellation can leave the
    integral itself near zero.
    """
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-12)
    errors = {}
    unconverged = []
    for name, g, kappa, omega in _spectrum_integrands():
        result = integrate_log_oscillatory(g, kappa, *SPECTRUM_WINDOW, cfg, omega=omega)
        reference, scale = _dense_reference(g, kappa, omega)
        errors[name] = abs(result.complex_value - reference) / scale
        if not result.converged:
            unconverged.append(name)
    check = _result("spectrum-shaped integrands", list(errors.values()), SPECTRUM_TOL, unconverged=unconverged)
    if unconverged:
        check.passed = False
    return check


def check_error_estimates() -> CheckResult:
    """Reported error estimates bound the true error up to roundoff.

    The reported number is the excess of the true error over the estimate,
    in units of `max(1, |exact|)`.
    """
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-14)
    excess = {}
    for name, run, exact in _closed_forms():
        result = run(cfg)
        scale = max(1.0, abs(exact))
        excess[name] = max(0.0, abs(result.complex_value - complex(exact)) - result.error_estimate) / scale
    for name, g, kappa, omega in _spectrum_integrands():
        result = integrate_log_oscillatory(g, kappa, *SPECTRUM_WINDOW, cfg.with_tolerances(abs_tol=1e-12), omega=omega)
        reference, scale = _dense_reference(g, kappa, omega)
        excess[name] = max(0.0, abs(result.complex_value - reference) - result.error_estimate) / max(1.0, scale)
    return _result("honest error estimates", list(excess.values()), ROUNDOFF_TOL)


def check_packet_overlaps() -> CheckResult:
    """Closed-form packet overlaps against the Klein-Gordon product on a grid."""
    errors = []
    for direction in Direction:
        spec = WavePacketSpec(n_param=settings.scenario.N_PARAM, direction=direction, center=0.3)
        for l in (-8.0, -6.0, -4.0, 4.0, 6.0, 8.0):
            errors.append(abs(kg_inner_product(l, spec) - minkowski_gaussian_overlap(l, spec)))
    return _result("packet overlaps vs KG product", errors, KG_TOL)


def check_bogoliubov() -> CheckResult:
    """|(w_k, u_l)|² against its overflow free closed form."""
    errors = []
    for a in (0.01, 1.0, 50.0):
        for k, l in ((0.7, 2.0), (3.0, 0.5), (-0.7, -2.0), (-3.0, -0.5)):
            exact = bogoliubov_norm_squared(k, l, a)
            errors.append(abs(abs(bogoliubov(k, l, a)) ** 2 / exact - 1.0))
    return _result("bogoliubov magnitude", errors, IDENTITY_TOL)


def check_fock_oracle(draws: int | None = None, cutoff: int | None = None) -> tuple[CheckResult, int | None]:
    """The covariance blocks against truncated Fock moments; returns the resolved sign."""
    try:
        suite = run_oracle_suite(draws=draws, cutoff=cutoff)
    except OracleMismatchError as exc:
        detail = {k: v for k, v in exc.diagnostics.items() if k != "entries"}
        return CheckResult(name="fock oracle", passed=False, max_error=math.inf, tolerance=settings.oracle.MATCH_TOL, detail=detail), None
    check = CheckResult(
        name="fock oracle",
        passed=True,
        max_error=suite.max_residual,
        tolerance=settings.oracle.MATCH_TOL,
        detail={
            "draws": suite.draws,
            "cutoff": suite.cutoff,
            "configured_sign": suite.configured_sign,
            "amplitude_sign": suite.amplitude_sign,
        },
    )
    return check, suite.cross_sign


def run_validation(draws: int | None = None, cutoff: int | None = None) -> ValidationReport:
    """Run every check; never raises on a failed check."""
    checks = [
        check_gamma_identity(),
        check_squeezing_identity(),
        check_quadrature(),
        check_spectrum_integrands(),
        check_error_estimates(),
        check_packet_overlaps(),
        check_bogoliubov(),
    ]
    oracle, sign = check_fock_oracle(draws, cutoff)
    checks.append(oracle)
    report = ValidationReport(checks=checks, cross_sign=sign, amplitude_sign=settings.gaussian.TMSS_AMPLITUDE_SIGN)
    logger.info(settings.log.VALIDATE_EVENT, passed=report.passed, failed=report.failed, cross_sign=sign)
    return report
