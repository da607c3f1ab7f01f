import csv
import math
from pathlib import Path

import numpy as np
import pytest
from scipy import integrate as scipy_integrate

from horizon.domain.modes.schemas import Direction, WavePacketSpec
from horizon.domain.modes.services import bogoliubov, bogoliubov_conjugate, minkowski_gaussian_overlap, mirror
from horizon.domain.overlaps.schemas import DetectorMode, OverlapSet, ScenarioInputs
from horizon.domain.overlaps.services import (
    check_acceleration,
    compute_overlaps,
    dump_spectra,
    normalizations,
    packet_normalization,
    rindler_spectrum,
    rindler_spectrum_A,
    rindler_spectrum_B,
)
from horizon.domain.quadrature.schemas import QuadratureConfig, QuadratureResult
from horizon.lib.cache import SpectrumCache
from horizon.lib.exceptions import DegenerateConfigurationError, DomainError
from horizon.lib.schema import ComplexValue


def test_scenario_packets() -> None:
    inputs = ScenarioInputs.for_acceleration(0.5)
    assert inputs.packet_A.center == -2.0
    assert inputs.packet_A.sign == -1
    assert inputs.packet_B.center == 2.0
    assert inputs.packet_B.sign == 1
    assert inputs.cache_key[0] == 0.5
    assert inputs.cache_key[-1] == "two_sided"


@pytest.mark.parametrize("a", [1e-5, 0.0, 2e3])
def test_acceleration_window(a: float) -> None:
    with pytest.raises(DegenerateConfigurationError):
        check_acceleration(a)


def test_normalization_ignores_translation() -> None:
    norm, result = packet_normalization(WavePacketSpec(n_param=6.0, cutoff=0.5, center=0.0))
    moved, _ = packet_normalization(WavePacketSpec(n_param=6.0, cutoff=0.5, center=-7.0, direction=Direction.LEFT))
    assert result.converged
    assert norm == moved
    assert abs(norm - 1.0) < 0.02


@pytest.mark.parametrize("cutoff", [0.0, 30.0])
def test_degenerate_cutoff(cutoff: float) -> None:
    with pytest.raises(DegenerateConfigurationError):
        packet_normalization(WavePacketSpec(n_param=6.0, cutoff=cutoff))


def test_spectrum_below_cutoff_or_wrong_side() -> None:
    spec = WavePacketSpec(n_param=6.0, cutoff=0.5, center=2.0)
    with pytest.raises(DomainError):
        rindler_spectrum(0.2, spec, 1.0)
    zero = rindler_spectrum(-3.0, spec, 1.0)
    assert zero.complex_value == 0
    assert zero.converged


def test_spectrum_matches_dense_trapezoid() -> None:
    a, k = 0.1, 0.5
    spec = WavePacketSpec(n_param=6.0, cutoff=0.5, direction=Direction.RIGHT, center=1.0 / a)
    norm, _ = packet_normalization(spec)
    result = rindler_spectrum(k, spec, a, norm=norm)
    assert result.converged

    l = np.linspace(0.5, 18.0, 1_000_001)
    integrand = bogoliubov(k, l, a) * minkowski_gaussian_overlap(l, spec)
    brute = norm * scipy_integrate.trapezoid(integrand, l)
    assert abs(result.complex_value - brute) < 1e-6 * abs(brute)


@pytest.mark.parametrize(
    ("direction", "conjugate"),
    [(Direction.LEFT, False), (Direction.LEFT, True), (Direction.RIGHT, True)],
)
def test_spectra_match_dense_trapezoid(direction: Direction, conjugate: bool) -> None:
    a = 0.1
    sign = 1 if direction == Direction.RIGHT else -1
    k = 0.5 * sign
    spec = WavePacketSpec(n_param=6.0, cutoff=0.5, direction=direction, center=sign / a)
    norm, _ = packet_normalization(spec)
    result = rindler_spectrum(k, spec, a, conjugate=conjugate, norm=norm)
    assert result.converged

    l = sign * np.linspace(0.5, 18.0, 1_000_001)
    if conjugate:
        integrand = bogoliubov_conjugate(k, l, a) * np.conj(minkowski_gaussian_overlap(l, spec))
    else:
        integrand = bogoliubov(k, l, a) * minkowski_gaussian_overlap(l, spec)
    brute = sign * norm * scipy_integrate.trapezoid(integrand, l)
    assert abs(result.complex_value - brute) < 1e-6 * abs(brute)


def test_suppressed_spectrum_is_floored() -> None:
    spec = WavePacketSpec(n_param=6.0, cutoff=0.5, center=20.0)
    result = rindler_spectrum(6.0, spec, 0.05, conjugate=True, floor=1e-9)
    assert result.complex_value == 0
    assert result.converged
    assert result.evaluations == 0
    assert result.error_estimate <= 1e-9


def test_floor_keeps_resolved_spectra() -> None:
    spec = WavePacketSpec(n_param=6.0, cutoff=0.5, center=2.0)
    exact = rindler_spectrum(2.0, spec, 0.5)
    floored = rindler_spectrum(2.0, spec, 0.5, floor=1e-9)
    assert floored.converged
    assert floored.evaluations > 0
    assert abs(floored.complex_value - exact.complex_value) <= 1e-8


def test_mirrored_packet_shares_magnitudes() -> None:
    spec = WavePacketSpec(n_param=6.0, cutoff=0.5, direction=Direction.RIGHT, center=2.0)
    right = rindler_spectrum(2.0, spec, 0.5)
    left = rindler_spectrum(-2.0, mirror(spec), 0.5)
    assert math.isclose(abs(right.complex_value), abs(left.complex_value), rel_tol=1e-7)


def test_spectra_are_memoized() -> None:
    inputs = ScenarioInputs.for_acceleration(0.5)
    cache: SpectrumCache[QuadratureResult] = SpectrumCache()
    right = rindler_spectrum_B(2.0, inputs, cache)
    rindler_spectrum_A(-2.0, inputs, cache)
    assert len(cache) == 2
    assert rindler_spectrum_B(2.0, inputs, cache) is right
    assert cache.samples("A", False)[0][0] == -2.0


def test_dump_spectra(tmp_path: Path) -> None:
    cache: SpectrumCache[QuadratureResult] = SpectrumCache()
    value = QuadratureResult(value=ComplexValue(re=0.5, im=-0.25), error_estimate=1e-9, evaluations=15, converged=True)
    cache.put(("B", False, 2.0), value)
    cache.put(("B", False, 1.0), value)
    paths = dump_spectra(cache, tmp_path / "spectra")
    assert [p.name for p in paths] == ["spectrum_A.csv", "spectrum_A_conj.csv", "spectrum_B.csv", "spectrum_B_conj.csv"]
    rows = list(csv.reader((tmp_path / "spectra" / "spectrum_B.csv").open()))
    assert rows[0] == ["k", "Re", "Im", "error_estimate"]
    assert [r[0] for r in rows[1:]] == ["1", "2"]
    assert rows[1][1:3] == ["0.5", "-0.25"]
    assert len(list(csv.reader((tmp_path / "spectra" / "spectrum_A.csv").open()))) == 1


def test_inertial_limit() -> None:
    ov = OverlapSet.inertial_limit()
    assert ov.converged
    assert ov.beta.value == 1
    assert ov.n_unruh == 0


@pytest.mark.slow
def test_overlaps_two_sided() -> None:
    inputs = ScenarioInputs.for_acceleration(1.0, quad_cfg=QuadratureConfig(rel_tol=1e-6))
    ov = compute_overlaps(inputs)
    assert ov.converged
    assert ov.alpha.im == 0.0
    assert ov.beta.im == 0.0
    assert 0.0 < ov.alpha.re < 1.0 / ov.norm_R
    assert 0.0 < ov.beta.re < 1.0 / ov.norm_R
    assert math.isclose(ov.alpha.re + ov.beta.re, 1.0 / ov.norm_R, rel_tol=1e-6)
    assert ov.n_unruh > 0
    norm_a, norm_b, norm_r = normalizations(inputs)
    assert math.isclose(norm_r, ov.norm_R, rel_tol=1e-12)
    assert norm_a == norm_b


@pytest.mark.slow
def test_overlaps_matched_detector_ignores_alice() -> None:
    inputs = ScenarioInputs.for_acceleration(
        1.0,
        quad_cfg=QuadratureConfig(rel_tol=1e-6),
        detector=DetectorMode.MATCHED,
    )
    ov = compute_overlaps(inputs)
    assert ov.alpha.value == 0
    assert ov.alpha_prime.value == 0
    assert ov.beta.re > 0


@pytest.mark.slow
def test_small_acceleration_decouples() -> None:
    cfg = QuadratureConfig(rel_tol=1e-6)
    low = compute_overlaps(ScenarioInputs.for_acceleration(1e-3, quad_cfg=cfg))
    mid = compute_overlaps(ScenarioInputs.for_acceleration(1.0, quad_cfg=cfg))
    assert low.converged and mid.converged
    assert low.n_unruh < mid.n_unruh
    assert low.alpha.re / low.beta.re < mid.alpha.re / mid.beta.re
