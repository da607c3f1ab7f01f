from __future__ import annotations

from enum import Enum

from pydantic import NonNegativeFloat, PositiveFloat

from horizon.lib import settings
from horizon.lib.schema import FrozenModel

__all__ = ["Acceleration", "Direction", "WavePacketSpec"]


class Direction(str, Enum):
    """Propagation direction of a Minkowski wave packet."""

    RIGHT = "right"
    LEFT = "left"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.RIGHT else -1

    def flipped(self) -> Direction:
        return Direction.LEFT if self is Direction.RIGHT else Direction.RIGHT


class WavePacketSpec(FrozenModel):
    """A cutoff Gaussian packet, lengths in units of L and c = 1.

    Right movers have Minkowski support `l >= Λ`, left movers `l <= −Λ`.
    """

    n_param: PositiveFloat = settings.scenario.N_PARAM
    cutoff: NonNegativeFloat = settings.scenario.CUTOFF
    direction: Direction = Direction.RIGHT
    center: float = 0.0

    @property
    def sign(self) -> int:
        """+1 for right movers, −1 for left movers."""
        return Direction(self.direction).sign


class Acceleration(FrozenModel):
    """Dimensionless proper acceleration aL/c²."""

    a: PositiveFloat

    def __float__(self) -> float:
        return self.a
