import cmath
import math

import numpy as np
import pytest

from horizon.domain.modes.schemas import Acceleration, Direction, WavePacketSpec
from horizon.domain.modes.services import (
    bogoliubov,
    bogoliubov_conjugate,
    bogoliubov_norm_squared,
    bogoliubov_prefactor,
    kg_inner_product,
    minkowski_gaussian_overlap,
    mirror,
    packet_envelope,
)
from horizon.lib.exceptions import DomainError


def test_overlap_at_central_frequency() -> None:
    spec = WavePacketSpec(n_param=6.0)
    assert math.isclose(abs(minkowski_gaussian_overlap(6.0, spec)), (2 * math.pi) ** -0.25, rel_tol=1e-14)


def test_translation_only_shifts_phase() -> None:
    centred = WavePacketSpec(n_param=6.0)
    shifted = WavePacketSpec(n_param=6.0, center=2.5)
    l = 4.5
    ratio = minkowski_gaussian_overlap(l, shifted) / minkowski_gaussian_overlap(l, centred)
    assert math.isclose(abs(ratio), 1.0, rel_tol=1e-14)
    assert cmath.isclose(ratio, cmath.exp(-1j * l * 2.5), rel_tol=1e-12)


def test_overlap_matches_kg_inner_product() -> None:
    spec = WavePacketSpec(n_param=6.0, direction=Direction.RIGHT, center=1.0 / 0.5)
    closed = minkowski_gaussian_overlap(3.0, spec)
    assert abs(kg_inner_product(3.0, spec) - closed) < 1e-8


def test_envelope_is_overlap_magnitude() -> None:
    spec = WavePacketSpec(n_param=6.0, direction=Direction.LEFT, center=-0.7)
    m = np.array([1.0, 5.0, 9.0])
    np.testing.assert_allclose(packet_envelope(m, 6.0), np.abs(minkowski_gaussian_overlap(-m, spec)), rtol=1e-14)


def test_zero_momentum_is_excluded() -> None:
    with pytest.raises(DomainError):
        minkowski_gaussian_overlap(0.0, WavePacketSpec())
    with pytest.raises(DomainError):
        bogoliubov(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        bogoliubov(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        bogoliubov(1.0, 1.0, 0.0)


def test_opposite_signs_decouple() -> None:
    assert bogoliubov(2.0, -3.0, 0.7) == 0
    assert bogoliubov_conjugate(-2.0, 3.0, 0.7) == 0
    assert bogoliubov_norm_squared(2.0, -3.0, 0.7) == 0.0


@pytest.mark.parametrize(("k", "l", "a"), [(0.7, 2.0, 0.01), (3.0, 0.5, 1.0), (-3.0, -0.5, 50.0), (40.0, 7.0, 0.5)])
def test_magnitude_closed_form(k: float, l: float, a: float) -> None:
    assert math.isclose(abs(bogoliubov(k, l, a)) ** 2, bogoliubov_norm_squared(k, l, a), rel_tol=1e-10)


def test_conjugate_ratio() -> None:
    a = 0.8
    ratio = bogoliubov_conjugate(a, 2.0, a) / bogoliubov(a, 2.0, a)
    assert cmath.isclose(ratio, math.exp(-math.pi), rel_tol=1e-12)


def test_large_frequency_does_not_overflow() -> None:
    value = bogoliubov(500.0, 6.0, 0.01)
    assert math.isfinite(abs(value))
    assert math.isclose(abs(value) ** 2, bogoliubov_norm_squared(500.0, 6.0, 0.01), rel_tol=1e-9)


def test_prefactor_factorisation() -> None:
    k, l, a = 1.3, 4.0, 0.6
    expected = bogoliubov_prefactor(k, a) * 2.0 / math.sqrt(l) * cmath.exp(1j * (k / a) * math.log(l))
    assert cmath.isclose(bogoliubov(k, l, a), expected, rel_tol=1e-12)


def test_vectorized() -> None:
    k = np.array([1.0, 2.0, -1.0])
    l = np.array([3.0, -3.0, -3.0])
    values = bogoliubov(k, l, Acceleration(a=1.0))
    assert values.shape == (3,)
    assert values[1] == 0


def test_mirror() -> None:
    spec = WavePacketSpec(n_param=6.0, direction=Direction.RIGHT, center=0.4)
    flipped = mirror(spec)
    assert flipped.sign == -1
    assert flipped.center == 0.4
    assert mirror(flipped) == spec
