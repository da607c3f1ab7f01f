from __future__ import annotations

import math
from collections.abc import Callable, Generator
from typing import TYPE_CHECKING

import pytest
from click.testing import CliRunner

from horizon.domain.overlaps.schemas import OverlapSet
from horizon.lib.cache import overlap_cache
from horizon.lib.schema import ComplexValue

if TYPE_CHECKING:
    from horizon.domain.overlaps.schemas import ScenarioInputs
    from horizon.lib.cache import SpectrumCache


def synthetic_overlaps(a: float, converged: bool = True) -> OverlapSet:
    """Overlaps with a dip in the fidelity at a = 1 and n_U = 0.01 a^1.5."""
    alpha = 0.5 * math.exp(-(math.log(a) ** 2) / 2.0)
    zero = ComplexValue(re=0.0, im=0.0)
    return OverlapSet(
        alpha=ComplexValue(re=alpha, im=0.0),
        alpha_prime=zero,
        beta=ComplexValue(re=math.sqrt(1.0 - alpha**2), im=0.0),
        beta_prime=zero,
        n_unruh=0.01 * a**1.5,
        norm_A=1.0,
        norm_B=1.0,
        norm_R=1.0,
        k_truncation=10.0,
        convergence={"I_B": converged},
        accel=a,
    )


def fake_compute_overlaps(inputs: ScenarioInputs, cache: SpectrumCache | None = None) -> OverlapSet:
    return synthetic_overlaps(inputs.a)


@pytest.fixture
def cli_runner() -> Generator[CliRunner, None, None]:
    yield CliRunner()


@pytest.fixture(autouse=True)
def _clear_overlap_cache() -> Generator[None, None, None]:
    overlap_cache.clear()
    yield
    overlap_cache.clear()


@pytest.fixture
def fake_overlaps(monkeypatch: pytest.MonkeyPatch) -> Generator[None, None, None]:
    """Replace the overlap integrals by `synthetic_overlaps` in the sweep and the cli."""
    monkeypatch.setattr("horizon.domain.sweep.services.compute_overlaps", fake_compute_overlaps)
    monkeypatch.setattr("horizon.cli.compute_overlaps", fake_compute_overlaps)
    yield


@pytest.fixture
def make_overlaps() -> Callable[..., OverlapSet]:
    return synthetic_overlaps
