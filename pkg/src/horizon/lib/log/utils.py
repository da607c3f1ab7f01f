"""Logging utilities.

`msgspec_json_renderer()`
    A JSON Renderer for structlog using msgspec, with the numpy and
    complex support of `horizon.lib.serialization`.

`unwrap_numpy`
    A structlog processor that turns numpy scalars into python numbers and
    summarizes arrays by shape, so console output stays readable.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np

from horizon.lib.serialization import to_json

__all__ = ["msgspec_json_renderer", "unwrap_numpy"]


if TYPE_CHECKING:
    from structlog.typing import EventDict, WrappedLogger


def msgspec_json_renderer(_: WrappedLogger, __: str, event_dict: EventDict) -> bytes:
    """Structlog processor that uses `msgspec` for JSON encoding.

    Args:
        _ ():
        __ ():
        event_dict (): The data to be logged.

    Returns:
        The log event encoded to JSON by msgspec.
    """
    return to_json(event_dict)


def _unwrap(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return f"<array shape={value.shape} dtype={value.dtype}>"
    if isinstance(value, np.generic):
        return value.item()
    return value


def unwrap_numpy(_: WrappedLogger, __: str, event_dict: EventDict) -> EventDict:
    """Replace numpy values in the log event.

    >>> unwrap_numpy(None, "info", {"a": np.float64(0.5), "m": np.eye(4)})
    {'a': 0.5, 'm': '<array shape=(4, 4) dtype=float64>'}
    """
    return {key: _unwrap(value) for key, value in event_dict.items()}
