import math

import numpy as np
import pytest

from horizon.domain.fock.schemas import ModeCoefficients, StateKind
from horizon.domain.fock.services import (
    build_state,
    ladder_operators,
    required_cutoff,
    run_oracle_suite,
    sector_moments,
    verify_covariance_blocks,
)
from horizon.domain.gaussian.services import cross_block, local_block
from horizon.lib import settings
from horizon.lib.exceptions import DomainError, OracleMismatchError, TruncationError

BOB_ONLY = ModeCoefficients.from_complex(0, 0, 1, 0)


def test_required_cutoff() -> None:
    assert required_cutoff(0.0) == 1
    assert required_cutoff(1.2, 1e-12) == 75
    assert math.tanh(1.2) ** (2 * (75 + 1)) <= 1e-12
    with pytest.raises(DomainError):
        required_cutoff(-0.5)


def test_ladder_operators_commute_across_modes() -> None:
    a, b = ladder_operators(5)
    assert a.shape == (25, 25)
    assert abs(a @ b - b @ a).max() == 0
    number = (a.conj().T @ a).diagonal()
    np.testing.assert_allclose(number.reshape(5, 5)[:, 0], np.arange(5))


@pytest.mark.parametrize("kind", list(StateKind))
def test_zero_squeezing_is_vacuum(kind: StateKind) -> None:
    state = build_state(kind, 0.0, 4)
    assert state.norm == pytest.approx(1.0)
    assert state.leakage == 0.0
    assert state.photon_number(0) == 0.0
    assert state.photon_number(1) == 0.0


def test_vacuum_kind_ignores_squeezing() -> None:
    assert build_state(StateKind.VACUUM, 2.0, 3).s == 0.0


@pytest.mark.parametrize("kind", [StateKind.TMSS, StateKind.THERMAL_PRODUCT])
def test_photon_number_per_mode(kind: StateKind) -> None:
    s = 0.9
    state = build_state(kind, s, 60)
    assert state.leakage < 1e-9
    for mode in (0, 1):
        assert state.photon_number(mode) == pytest.approx(math.sinh(s) ** 2, rel=1e-7)


def test_truncation_reports_required_cutoff() -> None:
    with pytest.raises(TruncationError) as exc_info:
        build_state(StateKind.TMSS, 1.2, 10)
    assert exc_info.value.required_cutoff == required_cutoff(1.2)
    with pytest.raises(TruncationError):
        build_state(StateKind.TMSS, 0.1, 0)
    with pytest.raises(DomainError):
        build_state(StateKind.TMSS, -0.1, 10)


def test_leaky_state_is_refused() -> None:
    state = build_state(StateKind.TMSS, 1.0, 5, tol=0.5)
    assert state.leakage > settings.oracle.LEAKAGE_TOL
    with pytest.raises(TruncationError, match="leakage"):
        sector_moments(state, BOB_ONLY)


def test_vacuum_moments_are_local_block() -> None:
    coeffs = ModeCoefficients.random(np.random.default_rng(5))
    moments = sector_moments(build_state(StateKind.VACUUM, 0.0, 3), coeffs)
    np.testing.assert_allclose(moments, local_block(coeffs), rtol=1e-12)


@pytest.mark.parametrize("kind", [StateKind.TMSS, StateKind.THERMAL_PRODUCT])
def test_bob_only_moments_are_thermal(kind: StateKind) -> None:
    s = 0.7
    moments = sector_moments(build_state(kind, s, 60), BOB_ONLY)
    np.testing.assert_allclose(moments, math.cosh(2 * s) * np.eye(2), rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize("s", [0.3, 0.8, 1.2])
def test_blocks_agree_with_fock_moments(s: float) -> None:
    rng = np.random.default_rng(17)
    for _ in range(3):
        report = verify_covariance_blocks(ModeCoefficients.random(rng), s)
        assert report.max_residual <= settings.oracle.MATCH_TOL
        assert report.cross_sign == 1
        assert report.amplitude_sign == -1
        assert report.cutoff >= required_cutoff(s, settings.oracle.VERIFY_TRUNCATION_TOL)


def test_no_overlap_with_alice_has_no_sign() -> None:
    coeffs = ModeCoefficients.random(np.random.default_rng(2)).without_alice()
    report = verify_covariance_blocks(coeffs, 0.8)
    assert report.cross_sign is None
    np.testing.assert_allclose(
        report.entries["tmss_minus_vacuum"],
        report.entries["thermal_minus_vacuum"],
        atol=1e-9,
    )


def test_flipped_sign_is_caught(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(settings.gaussian, "CROSS_BLOCK_SIGN", -1)
    coeffs = ModeCoefficients.random(np.random.default_rng(23))
    with pytest.raises(OracleMismatchError) as exc_info:
        verify_covariance_blocks(coeffs, 0.8)
    diagnostics = exc_info.value.diagnostics
    assert diagnostics["assembly_residual"] > settings.oracle.MATCH_TOL
    assert diagnostics["cross_sign"] == 1


def test_squeezing_above_oracle_range() -> None:
    with pytest.raises(DomainError):
        verify_covariance_blocks(BOB_ONLY, settings.oracle.MAX_SQUEEZING + 0.1)


def test_oracle_suite_resolves_configured_sign() -> None:
    suite = run_oracle_suite(s_values=[0.5], draws=2, seed=1)
    assert suite.cross_sign == 1
    assert suite.positive_amplitude_sign == -1
    assert suite.sign_agrees
    assert suite.draws == 2
    assert len(suite.reports) == 2


def test_oracle_suite_rejects_wrong_configuration(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(settings.gaussian, "CROSS_BLOCK_SIGN", -1)
    with pytest.raises(OracleMismatchError):
        run_oracle_suite(s_values=[0.5], draws=1, seed=1)


def test_amplitude_sign_alternates_amplitudes() -> None:
    s = 0.6
    plus = build_state(StateKind.TMSS, s, 40, amplitude_sign=1)
    minus = build_state(StateKind.TMSS, s, 40, amplitude_sign=-1)
    diagonal = np.arange(41) * plus.dim + np.arange(41)
    np.testing.assert_allclose(minus.amplitudes[diagonal], (-1.0) ** np.arange(41) * plus.amplitudes[diagonal])
    assert minus.amplitude_sign == -1
    assert minus.photon_number(1) == pytest.approx(plus.photon_number(1))
    with pytest.raises(DomainError):
        build_state(StateKind.TMSS, s, 40, amplitude_sign=0)


def test_positive_amplitudes_select_opposite_sign(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(settings.gaussian, "CROSS_BLOCK_SIGN", -1)
    coeffs = ModeCoefficients.random(np.random.default_rng(29))
    report = verify_covariance_blocks(coeffs, 0.8, amplitude_sign=1)
    assert report.cross_sign == -1
    assert report.max_residual <= settings.oracle.MATCH_TOL
    suite = run_oracle_suite(s_values=[0.5], draws=1, seed=3, amplitude_sign=1)
    assert suite.cross_sign == -1
    assert suite.positive_amplitude_sign == -1


def test_moments_converge_with_cutoff() -> None:
    s = 0.5
    coeffs = ModeCoefficients.random(np.random.default_rng(31))
    expected = (
        2.0 * math.sinh(s) ** 2 * local_block(coeffs)
        + settings.gaussian.CROSS_BLOCK_SIGN * 2.0 * math.sinh(2.0 * s) * cross_block(coeffs)
    )
    residuals = []
    for cutoff in (12, 16, 24):
        vacuum = sector_moments(build_state(StateKind.VACUUM, 0.0, cutoff), coeffs)
        tmss = sector_moments(build_state(StateKind.TMSS, s, cutoff, tol=1e-8), coeffs)
        residuals.append(float(np.max(np.abs(tmss - vacuum - expected))))
    assert residuals[-1] < residuals[0]
    assert residuals[-1] < 1e-10
