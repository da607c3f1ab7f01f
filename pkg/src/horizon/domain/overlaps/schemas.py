from __future__ import annotations

from enum import Enum

from pydantic import Field, NonNegativeFloat, PositiveFloat

from horizon.domain.modes.schemas import Acceleration, Direction, WavePacketSpec
from horizon.domain.quadrature.schemas import QuadratureConfig
from horizon.lib import settings
from horizon.lib.schema import ComplexValue, FrozenModel

__all__ = ["DetectorMode", "OverlapSet", "ScenarioInputs"]


class DetectorMode(str, Enum):
    """Which Rindler momenta Rob's detection packet is built from."""

    TWO_SIDED = "two_sided"
    """Both momentum signs, following Alice's and Bob's packets."""
    MATCHED = "matched"
    """Only k >= Λ, following Bob's packet; gives α = α′ = 0."""


def _default_quad_cfg() -> QuadratureConfig:
    return QuadratureConfig(rel_tol=settings.scenario.REL_TOL)


class ScenarioInputs(FrozenModel):
    """One acceleration of the three-party setup.

    The packet centres are fixed at ±1/a and are derived, not stored.
    """

    accel: Acceleration
    n_param: PositiveFloat = settings.scenario.N_PARAM
    cutoff: NonNegativeFloat = settings.scenario.CUTOFF
    envelope_widths: PositiveFloat = settings.scenario.ENVELOPE_WIDTHS
    quad_cfg: QuadratureConfig = Field(default_factory=_default_quad_cfg)
    detector: DetectorMode = DetectorMode.TWO_SIDED

    @classmethod
    def for_acceleration(cls, a: float, **kwargs: object) -> ScenarioInputs:
        return cls(accel=Acceleration(a=a), **kwargs)

    @property
    def a(self) -> float:
        return self.accel.a

    @property
    def packet_A(self) -> WavePacketSpec:  # noqa: N802
        """Alice's left mover centred at −1/a."""
        return WavePacketSpec(
            n_param=self.n_param,
            cutoff=self.cutoff,
            direction=Direction.LEFT,
            center=-1.0 / self.a,
        )

    @property
    def packet_B(self) -> WavePacketSpec:  # noqa: N802
        """Bob's right mover centred at +1/a."""
        return WavePacketSpec(
            n_param=self.n_param,
            cutoff=self.cutoff,
            direction=Direction.RIGHT,
            center=1.0 / self.a,
        )

    @property
    def cache_key(self) -> tuple[float, float, float, float, float, str]:
        return (
            self.a,
            self.n_param,
            self.cutoff,
            self.quad_cfg.rel_tol,
            self.quad_cfg.abs_tol,
            DetectorMode(self.detector).value,
        )


class OverlapSet(FrozenModel):
    """The s-independent scalars that fix both covariance matrices."""

    alpha: ComplexValue
    alpha_prime: ComplexValue
    beta: ComplexValue
    beta_prime: ComplexValue
    n_unruh: NonNegativeFloat
    norm_A: PositiveFloat  # noqa: N815
    norm_B: PositiveFloat  # noqa: N815
    norm_R: PositiveFloat  # noqa: N815
    k_truncation: float
    convergence: dict[str, bool] = {}
    error_estimates: dict[str, float] = {}
    accel: float | None = None
    detector: DetectorMode = DetectorMode.TWO_SIDED

    @property
    def converged(self) -> bool:
        return all(self.convergence.values())

    @classmethod
    def inertial_limit(cls) -> OverlapSet:
        """a = 0: Rob's packet coincides with Bob's and sees no Unruh particles."""
        zero = ComplexValue(re=0.0, im=0.0)
        return cls(
            alpha=zero,
            alpha_prime=zero,
            beta=ComplexValue(re=1.0, im=0.0),
            beta_prime=zero,
            n_unruh=0.0,
            norm_A=1.0,
            norm_B=1.0,
            norm_R=1.0,
            k_truncation=0.0,
            convergence={"inertial": True},
        )
