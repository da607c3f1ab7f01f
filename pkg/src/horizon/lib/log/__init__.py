"""All the logging config and things are in here."""

from __future__ import annotations

import logging
import logging.config
import sys
from typing import TYPE_CHECKING

import structlog

from horizon.lib import settings

from . import sweep
from .utils import msgspec_json_renderer, unwrap_numpy

if TYPE_CHECKING:
    from collections.abc import Sequence
    from typing import Any

    from structlog import BoundLogger
    from structlog.types import Processor

__all__ = (
    "config",
    "configure",
    "default_processors",
    "get_logger",
    "sweep",
)


default_processors = [
    structlog.contextvars.merge_contextvars,
    structlog.processors.add_log_level,
    structlog.processors.TimeStamper(fmt="iso", utc=True),
    unwrap_numpy,
]

stdlib_processors = [
    structlog.processors.TimeStamper(fmt="iso", utc=True),
    structlog.stdlib.add_log_level,
    structlog.stdlib.ExtraAdder(),
    unwrap_numpy,
    structlog.stdlib.ProcessorFormatter.remove_processors_meta,
]

if sys.stderr.isatty() or "pytest" in sys.modules:  # pragma: no cover
    LoggerFactory: Any = structlog.WriteLoggerFactory
    logger_file: Any = sys.stderr
    console_processor = structlog.dev.ConsoleRenderer(
        colors=sys.stderr.isatty(),
        exception_formatter=structlog.dev.plain_traceback,
    )
    default_processors.extend([console_processor])
    stdlib_processors.append(console_processor)
else:
    LoggerFactory = structlog.BytesLoggerFactory
    logger_file = sys.stderr.buffer
    default_processors.extend([structlog.processors.dict_tracebacks, msgspec_json_renderer])
    stdlib_processors.extend([structlog.processors.dict_tracebacks, structlog.processors.JSONRenderer()])


def configure(processors: Sequence[Processor]) -> None:
    """Call to configure `structlog` on startup.

    Module level `structlog.get_logger()` calls return proxies to the
    logger that is eventually called after this configurator function
    has been called. Therefore, nothing should try to log via structlog
    before this is called.
    """
    structlog.configure(
        cache_logger_on_first_use=True,
        logger_factory=LoggerFactory(file=logger_file),
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(settings.log.LEVEL),
    )


config: dict[str, Any] = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {"()": structlog.stdlib.ProcessorFormatter, "processors": stdlib_processors},
    },
    "handlers": {
        "stderr": {"class": "logging.StreamHandler", "formatter": "standard", "stream": "ext://sys.stderr"},
    },
    "root": {"level": logging.getLevelName(settings.log.LEVEL), "handlers": ["stderr"]},
    "loggers": {
        "py.warnings": {
            "propagate": False,
            "level": settings.log.WARNINGS_LEVEL,
            "handlers": ["stderr"],
        },
    },
}
"""Pre-configured log config for stdlib loggers.

While we use structlog for internal logging, numerical warnings routed
through `logging.captureWarnings` end up in the same stream and format.
"""


def configure_stdlib() -> None:
    """Apply `config` to the stdlib logging tree."""
    logging.config.dictConfig(config)
    logging.captureWarnings(True)


def get_logger(*args: Any, **kwargs: Any) -> BoundLogger:
    """Return a configured logger for the given name.

    Returns:
        Logger: A configured logger instance
    """
    configure(default_processors)  # type: ignore[arg-type]
    return structlog.getLogger(*args, **kwargs)  # type: ignore
