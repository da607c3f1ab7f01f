"""Log config and utils for sweep grid points."""
from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import structlog

from horizon.lib import settings

__all__ = ["after_point", "before_point"]


if TYPE_CHECKING:
    from horizon.domain.sweep.schemas import SweepRecord

LOGGER = structlog.get_logger()


def before_point() -> None:
    """Clear the structlog contextvars for this grid point."""
    structlog.contextvars.clear_contextvars()


def after_point(record: SweepRecord) -> None:
    """Log the configured fields of a finished grid point."""
    log_ctx = {k: getattr(record, k) for k in settings.log.SWEEP_FIELDS}
    log_ctx["wall_time_ms"] = round(record.wall_time * 1000.0, 3)
    if record.result is not None:
        log_ctx["fidelity"] = record.result.fidelity
    level = logging.ERROR if record.error else logging.INFO
    LOGGER.log(level, settings.log.SWEEP_EVENT, **log_ctx)
