import math

import numpy as np
import pytest

from horizon.domain.quadrature.schemas import QuadratureConfig, QuadratureResult
from horizon.domain.quadrature.services import (
    integrate,
    integrate_log_oscillatory,
    integrate_panels,
    integrate_to_infinity,
)
from horizon.lib.exceptions import DomainError, IntegrandEvaluationError
from horizon.lib.schema import ComplexValue

CFG = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-14)


def test_polynomial_and_sine() -> None:
    result = integrate(lambda x: x**2, 0.0, 1.0, CFG)
    assert result.converged
    assert abs(result.complex_value - 1.0 / 3.0) < 1e-14
    assert abs(integrate(np.sin, 0.0, math.pi, CFG).complex_value - 2.0) < 1e-10


def test_empty_and_invalid_intervals() -> None:
    result = integrate(np.cos, 1.0, 1.0, CFG)
    assert result.complex_value == 0
    assert result.evaluations == 0
    with pytest.raises(DomainError):
        integrate(np.cos, 2.0, 1.0, CFG)
    with pytest.raises(DomainError):
        integrate(np.cos, 0.0, math.inf, CFG)


def test_nan_integrand_names_abscissa() -> None:
    with pytest.raises(IntegrandEvaluationError) as exc_info:
        integrate(lambda x: np.where(x > 0.5, np.nan, x), 0.0, 1.0, CFG)
    assert exc_info.value.abscissa > 0.5


def test_budget_exhaustion_is_flagged_not_raised() -> None:
    cfg = QuadratureConfig(rel_tol=1e-12, max_evaluations=60)
    result = integrate(lambda x: np.sqrt(x), 0.0, 1.0, cfg)
    assert not result.converged
    assert "budget" in (result.diagnostic or "")
    assert result.evaluations <= 60

    tiny = QuadratureConfig(max_evaluations=15)
    result = integrate_panels(np.cos, [0.0, 1.0, 2.0], tiny)
    assert not result.converged
    assert "initial panels" in (result.diagnostic or "")


def test_panel_sum_does_not_depend_on_edges() -> None:
    one = integrate_panels(np.exp, [0.0, 1.0], CFG).complex_value
    many = integrate_panels(np.exp, np.linspace(0.0, 1.0, 7), CFG).complex_value
    assert abs(one - (math.e - 1.0)) < 1e-12
    assert abs(many - one) < 1e-12


def test_semi_infinite() -> None:
    result = integrate_to_infinity(lambda x: np.exp(-x), 0.0, CFG)
    assert result.converged
    assert abs(result.complex_value - 1.0) < 1e-9
    gauss = integrate_to_infinity(lambda x: np.exp(-(x**2)), 0.0, CFG)
    assert abs(gauss.complex_value - math.sqrt(math.pi) / 2.0) < 1e-9
    algebraic = integrate_to_infinity(lambda x: 1.0 / (1.0 + x) ** 2, 0.0, CFG)
    assert abs(algebraic.complex_value - 1.0) < 1e-9


def test_non_decaying_tail_is_flagged() -> None:
    result = integrate_to_infinity(lambda x: 1.0 / np.sqrt(1.0 + x), 0.0, QuadratureConfig(max_evaluations=600))
    assert not result.converged
    assert "does not decay" in (result.diagnostic or "")


@pytest.mark.parametrize("kappa", [1.0, 10.0, 50.0, 200.0])
def test_log_oscillatory_closed_forms(kappa: float) -> None:
    result = integrate_log_oscillatory(np.reciprocal, kappa, 1.0, math.e, CFG)
    assert result.converged
    assert abs(result.complex_value - (np.exp(1j * kappa) - 1.0) / (1j * kappa)) < 1e-9

    result = integrate_log_oscillatory(np.ones_like, kappa, 1.0, math.e**2, CFG)
    exact = (math.e ** (2.0 * (1.0 + 1j * kappa)) - 1.0) / (1.0 + 1j * kappa)
    assert abs(result.complex_value - exact) < 1e-9 * max(1.0, abs(exact))


def test_linear_phase_with_stationary_point() -> None:
    # phase κ ln m + ω m is stationary at m = 2
    kappa, omega = 10.0, -5.0
    reference = integrate(
        lambda m: np.exp(1j * (kappa * np.log(m) + omega * m)),
        0.5,
        4.0,
        QuadratureConfig(rel_tol=1e-12, abs_tol=1e-15),
    )
    result = integrate_log_oscillatory(np.ones_like, kappa, 0.5, 4.0, CFG, omega=omega)
    assert result.converged
    assert abs(result.complex_value - reference.complex_value) < 1e-8


def test_log_oscillatory_needs_positive_lower_limit() -> None:
    with pytest.raises(DomainError):
        integrate_log_oscillatory(np.ones_like, 1.0, 0.0, 1.0, CFG)


def test_result_arithmetic() -> None:
    one = QuadratureResult(value=ComplexValue(re=1.0, im=0.0), error_estimate=1e-3, evaluations=15, converged=True)
    bad = QuadratureResult(
        value=ComplexValue(re=0.0, im=1.0),
        error_estimate=1e-2,
        evaluations=30,
        converged=False,
        diagnostic="x",
    )
    total = one + bad
    assert total.complex_value == 1 + 1j
    assert total.evaluations == 45
    assert not total.converged
    assert total.diagnostic == "x"
    scaled = one.scaled(-2j)
    assert scaled.complex_value == -2j
    assert scaled.error_estimate == 2e-3


def test_linear_and_additive() -> None:
    def f(x: np.ndarray) -> np.ndarray:
        return np.exp(-x) * np.cos(3.0 * x)

    def g(x: np.ndarray) -> np.ndarray:
        return np.sqrt(x) + 1j * x**3

    both = integrate(lambda x: 2.0 * f(x) - 0.5j * g(x), 0.0, 4.0, CFG)
    parts = 2.0 * integrate(f, 0.0, 4.0, CFG).complex_value - 0.5j * integrate(g, 0.0, 4.0, CFG).complex_value
    assert abs(both.complex_value - parts) < 1e-9 * abs(parts)

    split = integrate(f, 0.0, 1.3, CFG) + integrate(f, 1.3, 4.0, CFG)
    assert split.converged
    assert abs(split.complex_value - integrate(f, 0.0, 4.0, CFG).complex_value) < 1e-10
