from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from horizon.domain.overlaps.schemas import OverlapSet
from horizon.lib.schema import BaseModel, ComplexValue, FrozenModel

if TYPE_CHECKING:
    import numpy.typing as npt

__all__ = ["BlockReport", "ModeCoefficients", "OracleSuiteReport", "StateKind", "TruncatedState"]


class StateKind(str, Enum):
    """States of Alice's and Bob's modes the oracle can build."""

    VACUUM = "vacuum"
    TMSS = "tmss"
    THERMAL_PRODUCT = "thermal_product"


@dataclass
class TruncatedState:
    """A two-mode state on photon numbers 0..cutoff of each mode.

    The index of |n_a, n_b⟩ is `n_a * dim + n_b` with `dim = cutoff + 2`:
    one empty level on top keeps `a†` exact on every stored component.
    Pure states carry `amplitudes`, the thermal product carries the
    diagonal `populations`.
    """

    kind: StateKind
    s: float
    cutoff: int
    amplitudes: npt.NDArray[np.complex128] | None = None
    populations: npt.NDArray[np.float64] | None = None
    amplitude_sign: int = 1

    @property
    def dim(self) -> int:
        return self.cutoff + 2

    @property
    def norm(self) -> float:
        """Trace of the truncated state."""
        if self.amplitudes is not None:
            return float(np.vdot(self.amplitudes, self.amplitudes).real)
        if self.populations is not None:
            return float(np.sum(self.populations))
        return 0.0

    @property
    def leakage(self) -> float:
        """Weight lost to the truncation."""
        return max(0.0, 1.0 - self.norm)

    def photon_number(self, mode: int = 0) -> float:
        """⟨n⟩ of mode 0 (a) or 1 (b), renormalized to the truncated trace."""
        weights = (
            np.abs(self.amplitudes) ** 2 if self.amplitudes is not None else np.asarray(self.populations)
        ).reshape(self.dim, self.dim)
        counts = np.arange(self.dim, dtype=np.float64)
        marginal = weights.sum(axis=1 - mode)
        return float(counts @ marginal) / self.norm


class ModeCoefficients(FrozenModel):
    """Decomposition of Rob's operator on Alice's and Bob's modes.

    `d = αa + α′a† + βb + β′b† + d⊥`; the coefficients need not come from
    the overlap integrals.
    """

    alpha: ComplexValue
    alpha_prime: ComplexValue
    beta: ComplexValue
    beta_prime: ComplexValue

    @classmethod
    def from_complex(cls, alpha: complex, alpha_prime: complex, beta: complex, beta_prime: complex) -> ModeCoefficients:
        return cls(
            alpha=ComplexValue.from_complex(alpha),
            alpha_prime=ComplexValue.from_complex(alpha_prime),
            beta=ComplexValue.from_complex(beta),
            beta_prime=ComplexValue.from_complex(beta_prime),
        )

    @classmethod
    def random(cls, rng: np.random.Generator, scale: float = 1.0) -> ModeCoefficients:
        """Four complex normal coefficients with E|c|² = scale²."""
        real, imag = rng.normal(scale=scale / math.sqrt(2.0), size=(2, 4))
        values = real + 1j * imag
        return cls.from_complex(*(complex(v) for v in values))

    def without_alice(self) -> ModeCoefficients:
        """The same coefficients with α = α′ = 0."""
        zero = ComplexValue(re=0.0, im=0.0)
        return self.copy(update={"alpha": zero, "alpha_prime": zero})

    def as_overlaps(self) -> OverlapSet:
        """An `OverlapSet` with these coefficients and no Unruh particles."""
        return OverlapSet(
            alpha=self.alpha,
            alpha_prime=self.alpha_prime,
            beta=self.beta,
            beta_prime=self.beta_prime,
            n_unruh=0.0,
            norm_A=1.0,
            norm_B=1.0,
            norm_R=1.0,
            k_truncation=0.0,
            convergence={"oracle": True},
        )


class BlockReport(BaseModel):
    """Outcome of one block verification."""

    s: float
    cutoff: int
    separable_residual: float
    """max |(thermal − vacuum) − 2 sinh²s L|."""
    entangled_residual: float
    """max |(tmss − vacuum) − 2 sinh²s L − sign·2 sinh 2s C| at the resolved sign."""
    assembly_residual: float
    """max |(σ − I) − (tmss − vacuum)| and the same for σ_s, through the gaussian assembly."""
    vacuum_residual: float
    """max |vacuum moments − L|."""
    cross_sign: int | None
    """Sign of `cross_block` selected by the moments; `None` when the block vanishes."""
    cross_magnitude: float
    amplitude_sign: int = 1
    """Sign ε of the squeezed state amplitudes `(ε tanh s)^n`."""
    entries: dict[str, list[list[float]]] = {}

    @property
    def max_residual(self) -> float:
        return max(self.separable_residual, self.entangled_residual, self.assembly_residual, self.vacuum_residual)


class OracleSuiteReport(BaseModel):
    """Random draw campaign over several squeezing values."""

    cross_sign: int | None
    configured_sign: int
    draws: int
    cutoff: int
    max_residual: float
    amplitude_sign: int = 1
    reports: list[BlockReport] = []

    @property
    def sign_agrees(self) -> bool:
        return self.cross_sign == self.configured_sign

    @property
    def positive_amplitude_sign(self) -> int | None:
        """The cross sign for positive `tanh^n s` amplitudes.

        Flipping ε is the phase change b -> -b, which flips the cross block.

        >>> OracleSuiteReport(cross_sign=1, configured_sign=1, amplitude_sign=-1, draws=0, cutoff=1, max_residual=0.0).positive_amplitude_sign
        -1
        """
        return None if self.cross_sign is None else self.cross_sign * self.amplitude_sign
