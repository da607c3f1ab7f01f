from __future__ import annotations

from pydantic import Field, NonNegativeFloat, PositiveFloat, validator

from horizon import utils
from horizon.domain.gaussian.schemas import CovarianceMatrix, DiscriminationResult
from horizon.domain.overlaps.schemas import DetectorMode, OverlapSet, ScenarioInputs
from horizon.domain.quadrature.schemas import QuadratureConfig
from horizon.lib import settings
from horizon.lib.schema import BaseModel, StrictModel

__all__ = ["FidelityMinimum", "PowerLawFit", "SweepConfig", "SweepRecord"]


def _default_a_grid() -> list[float]:
    return utils.geometric_grid(settings.sweep.A_MIN, settings.sweep.A_MAX, settings.sweep.POINTS)


def _default_quad_cfg() -> QuadratureConfig:
    return QuadratureConfig(rel_tol=settings.scenario.REL_TOL)


class SweepConfig(StrictModel):
    """A grid of accelerations times a list of squeezing values."""

    a_grid: list[PositiveFloat] = Field(default_factory=_default_a_grid)
    s_values: list[NonNegativeFloat] = Field(default_factory=lambda: list(settings.sweep.S_VALUES))
    n_param: PositiveFloat = settings.scenario.N_PARAM
    cutoff: NonNegativeFloat = settings.scenario.CUTOFF
    envelope_widths: PositiveFloat = settings.scenario.ENVELOPE_WIDTHS
    quad_cfg: QuadratureConfig = Field(default_factory=_default_quad_cfg)
    detector: DetectorMode = DetectorMode.TWO_SIDED
    refine_minimum: bool = True

    @validator("a_grid")
    def check_sorted(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("a_grid must not be empty")
        if any(lo >= hi for lo, hi in zip(value, value[1:])):
            raise ValueError("a_grid must be strictly ascending")
        return value

    @validator("s_values")
    def check_squeezing(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("s_values must not be empty")
        if max(value) > settings.gaussian.MAX_SQUEEZING:
            raise ValueError(f"squeezing is capped at {settings.gaussian.MAX_SQUEEZING}")
        return value

    def inputs(self, a: float) -> ScenarioInputs:
        """The single-acceleration scenario of this sweep."""
        return ScenarioInputs.for_acceleration(
            a,
            n_param=self.n_param,
            cutoff=self.cutoff,
            envelope_widths=self.envelope_widths,
            quad_cfg=self.quad_cfg,
            detector=self.detector,
        )

    def keys(self) -> list[tuple[float, float]]:
        """`(a, s)` for every grid point, a major."""
        return [(a, s) for a in self.a_grid for s in self.s_values]


class SweepRecord(BaseModel):
    """One (a, s) grid point.

    A failed point keeps whatever was computed before the failure and the
    error message; `converged` is false.
    """

    a: float
    s: float
    overlaps: OverlapSet | None = None
    sigma: CovarianceMatrix | None = None
    sigma_s: CovarianceMatrix | None = None
    result: DiscriminationResult | None = None
    wall_time: float = 0.0
    """Seconds, including this point's share of the overlap computation."""
    converged: bool = False
    error: str | None = None

    @property
    def key(self) -> tuple[float, float]:
        return (self.a, self.s)

    @property
    def ok(self) -> bool:
        return self.converged and self.result is not None


class FidelityMinimum(BaseModel):
    """Location and depth of the fidelity dip of one squeezing value."""

    s: float
    a_star: float
    f_min: float
    f_plus_min: float
    f_minus_min: float
    bracket: tuple[float, float]
    evaluations: int = 0
    """Pipeline runs spent on refinement."""
    refined: bool = False


class PowerLawFit(BaseModel):
    """Least squares line through log10 ⟨n̂⟩_U against log10 a."""

    exponent: float
    log10_prefactor: float
    window: tuple[float, float]
    points: int
    residual_rms: float
    shifted_exponent: float | None = None
    """Exponent over the window shifted down by FIT_SHIFT_DECADES."""

    @property
    def stability(self) -> float | None:
        """Relative change of the exponent under the window shift."""
        if self.shifted_exponent is None:
            return None
        return abs(self.shifted_exponent - self.exponent) / abs(self.exponent)
