from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Final

from pydantic import BaseSettings, ValidationError, validator

from horizon import utils

__all__ = [
    "AppSettings",
    "GaussianSettings",
    "LogSettings",
    "OracleSettings",
    "QuadratureSettings",
    "ScenarioSettings",
    "SweepSettings",
    "WorkerSettings",
    "app",
    "gaussian",
    "log",
    "oracle",
    "quad",
    "scenario",
    "sweep",
    "worker",
]

DEFAULT_MODULE_NAME = "horizon"
BASE_DIR: Final = utils.module_to_os_path(DEFAULT_MODULE_NAME)
TEMPLATES_DIR = Path(BASE_DIR / "domain" / "plots" / "templates")


class AppSettings(BaseSettings):
    """Generic application settings."""

    class Config:
        case_sensitive = True
        env_file = ".env"

    DEBUG: bool = False
    """Print full tracebacks and log at debug level."""
    ENVIRONMENT: str = "prod"
    """'dev', 'prod', etc."""
    NAME: str = "horizon"
    """Application name."""
    TEMPLATES_DIR: Path = TEMPLATES_DIR

    @property
    def slug(self) -> str:
        """Return a slugified name.

        Returns:
            `self.NAME`, all lowercase and hyphens instead of spaces.
        """
        return "-".join(s.lower() for s in self.NAME.split())


class LogSettings(BaseSettings):
    """Logging config for the application."""

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_prefix = "LOG_"

    LEVEL: int = 20
    """Stdlib log levels.

    Only emit logs at this level, or higher.
    """
    SWEEP_EVENT: str = "Sweep point"
    """Log event name for per grid point logs."""
    SWEEP_FIELDS: list[str] = [
        "a",
        "s",
        "converged",
        "error",
    ]
    """Attributes of a `SweepRecord` to be logged."""
    VALIDATE_EVENT: str = "Validation suite"
    """Log event name for validation suite summaries."""
    WARNINGS_LEVEL: int = 30
    """Level to log `py.warnings` (numpy floating point warnings)."""


class QuadratureSettings(BaseSettings):
    """Defaults for the adaptive quadrature stack."""

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_prefix = "QUAD_"

    REL_TOL: float = 1e-8
    """Requested relative tolerance."""
    ABS_TOL: float = 1e-14
    """Requested absolute tolerance."""
    MAX_EVALUATIONS: int = 200_000
    """Integrand evaluation budget for a single integral."""
    INNER_MAX_EVALUATIONS: int = 4_000_000
    """Evaluation budget for the oscillatory l-integrals."""
    PANELS_PER_PERIOD: int = 4
    """Panels per period of the oscillating phase."""
    MIN_PANELS: int = 8
    """Floor on the panel count of the oscillatory path."""
    TAIL_SAMPLE_EXPONENT: int = 40
    """Semi-infinite tails are sampled out to ``t = 1 - 2**-TAIL_SAMPLE_EXPONENT``."""


class ScenarioSettings(BaseSettings):
    """Wave packet and acceleration defaults."""

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_prefix = "SCENARIO_"

    N_PARAM: float = 6.0
    """Dimensionless central frequency N (units L = 1)."""
    CUTOFF: float = 0.5
    """Infrared cutoff Λ (units c = L = 1)."""
    ENVELOPE_WIDTHS: float = 12.0
    """Inner integrals are truncated at |l ∓ N| = ENVELOPE_WIDTHS."""
    MIN_ACCEL: float = 1e-4
    """Smallest supported aL/c²."""
    MAX_ACCEL: float = 1e3
    """Largest supported aL/c²."""
    K_WINDOW_LIMIT: int = 48
    """Maximum number of doubling windows for the outer k-integrals."""
    K_TAIL_FRACTION: float = 0.1
    """A window contributing less than this fraction of rel_tol ends the k-range."""
    REL_TOL: float = 1e-7
    """Relative tolerance of the overlap integrals."""
    INNER_TOL_FACTOR: float = 1e-2
    """Inner l-integrals run at ``REL_TOL * INNER_TOL_FACTOR``."""
    SPECTRUM_SCALE: float = 1.0
    """Magnitude of the spectra of unit-norm packets where they are appreciable.

    Spectra are resolved to ``inner rel_tol * SPECTRUM_SCALE`` in absolute
    terms, so the exponentially suppressed ones are not chased into roundoff.
    """


class GaussianSettings(BaseSettings):
    """Covariance matrix and fidelity settings."""

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_prefix = "GAUSSIAN_"

    CROSS_BLOCK_SIGN: int = 1
    """Sign multiplying `gaussian.services.cross_block` in the entangled matrix.

    `horizon validate` checks it against the Fock oracle built with
    `TMSS_AMPLITUDE_SIGN`.
    """
    TMSS_AMPLITUDE_SIGN: int = -1
    """Sign ε of the squeezed state amplitudes ``(ε tanh s)^n / cosh s``.

    -1 is ``exp[s(ab - a†b†)]|0⟩``, whose sinh 2s block is `cross_block` as
    built, with its leading minus. +1 (positive ``tanh^n s``) flips that
    block and pairs with CROSS_BLOCK_SIGN = -1.
    """
    PHYSICALITY_TOL: float = 1e-9
    """`det σ >= 1 - PHYSICALITY_TOL` marks a matrix as physical."""
    UNPHYSICAL_TOL: float = 1e-6
    """`fidelity` refuses matrices with `det σ < 1 - UNPHYSICAL_TOL`."""
    FIDELITY_CLAMP_TOL: float = 1e-9
    """Fidelities outside [0, 1] by less than this are clamped."""
    MAX_SQUEEZING: float = 10.0
    """Cap on the squeezing parameter s."""

    @validator("CROSS_BLOCK_SIGN", "TMSS_AMPLITUDE_SIGN")
    def check_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("signs must be 1 or -1")
        return value


class OracleSettings(BaseSettings):
    """Truncated Fock space oracle settings."""

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_prefix = "ORACLE_"

    CUTOFF: int = 60
    """Default maximum photon number per mode."""
    MAX_CUTOFF: int = 160
    """Largest cutoff the oracle will build."""
    TRUNCATION_TOL: float = 1e-10
    """Maximum discarded weight ``tanh^(2(cutoff+1)) s`` accepted by `build_state`."""
    VERIFY_TRUNCATION_TOL: float = 1e-12
    """Discarded weight targeted by the block verification; it raises the cutoff as needed."""
    LEAKAGE_TOL: float = 1e-8
    """Maximum norm leakage accepted by `sector_moments`."""
    MATCH_TOL: float = 1e-6
    """Entrywise tolerance of the block comparisons."""
    MAX_SQUEEZING: float = 1.5
    """Largest s the block verification accepts."""
    DRAWS: int = 20
    """Random coefficient draws per squeezing value."""
    SQUEEZING_VALUES: list[float] = [0.3, 0.8, 1.2]
    """Squeezing values exercised by `horizon validate`."""
    SEED: int = 20240601
    """Seed of the coefficient draws."""


class SweepSettings(BaseSettings):
    """Acceleration/squeezing sweep defaults."""

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_prefix = "SWEEP_"

        @classmethod
        def parse_env_var(cls, field_name: str, raw_val: str) -> Any:
            """Accept comma separated squeezing values as well as JSON."""
            if field_name == "S_VALUES" and not raw_val.lstrip().startswith("["):
                return [float(s) for s in raw_val.split(",") if s.strip()]
            return cls.json_loads(raw_val)  # type: ignore[attr-defined]

    A_MIN: float = 1e-3
    A_MAX: float = 1e2
    POINTS: int = 40
    S_VALUES: list[float] = [1.0, 2.0, 3.0]
    FAILURE_FRACTION: float = 0.2
    """Sweeps with a larger fraction of failed grid points are rejected."""
    GOLDEN_MAX_EVALUATIONS: int = 20
    """Pipeline evaluations allowed when refining a fidelity minimum."""
    GOLDEN_REL_WIDTH: float = 0.01
    """Refinement stops once the bracket is this narrow relative to a."""
    FIT_DECADES: float = 1.0
    """Width of the power-law fit window for the Unruh count."""
    FIT_SHIFT_DECADES: float = 0.5
    """Shift of the stability window."""


class WorkerSettings(BaseSettings):
    """Process pool configuration."""

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_prefix = "WORKER_"

    CONCURRENCY: int = os.cpu_count() or 1
    """Number of worker processes used for grid points."""


@lru_cache
def load_settings() -> (
    tuple[
        AppSettings,
        LogSettings,
        QuadratureSettings,
        ScenarioSettings,
        GaussianSettings,
        OracleSettings,
        SweepSettings,
        WorkerSettings,
    ]
):
    """Load Settings file.

    Returns:
        Settings: application settings
    """
    try:
        app: AppSettings = AppSettings.parse_obj({})
        log: LogSettings = LogSettings.parse_obj({})
        quad: QuadratureSettings = QuadratureSettings.parse_obj({})
        scenario: ScenarioSettings = ScenarioSettings.parse_obj({})
        gaussian: GaussianSettings = GaussianSettings.parse_obj({})
        oracle: OracleSettings = OracleSettings.parse_obj({})
        sweep: SweepSettings = SweepSettings.parse_obj({})
        worker: WorkerSettings = WorkerSettings.parse_obj({})
    except ValidationError as e:
        print("Could not load settings. %s", e)  # noqa: T201
        raise e from e
    return (
        app,
        log,
        quad,
        scenario,
        gaussian,
        oracle,
        sweep,
        worker,
    )


(
    app,
    log,
    quad,
    scenario,
    gaussian,
    oracle,
    sweep,
    worker,
) = load_settings()
