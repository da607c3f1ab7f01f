from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any

import msgspec
import numpy as np
from pydantic import BaseModel

__all__ = [
    "format_float",
    "from_json",
    "to_json",
    "to_json_line",
]


def _default(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.dict()
    if isinstance(value, np.floating | np.integer | np.bool_):
        return value.item()
    if isinstance(value, complex | np.complexfloating):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    try:
        val = str(value)
    except Exception as exc:  # noqa: BLE001
        raise TypeError from exc
    else:
        return val


_msgspec_json_encoder = msgspec.json.Encoder(enc_hook=_default)
_msgspec_json_decoder = msgspec.json.Decoder()


def to_json(value: Any) -> bytes:
    """Encode json with the optimized msgspec package.

    Floats are written with their shortest round-trip representation.
    """
    return _msgspec_json_encoder.encode(value)


def to_json_line(value: Any) -> bytes:
    """Encode one JSON-lines record, newline terminated."""
    return _msgspec_json_encoder.encode(value) + b"\n"


def from_json(value: bytes | str) -> Any:
    """Decode to an object with the optimized msgspec package."""
    return _msgspec_json_decoder.decode(value)


def format_float(value: float | None) -> str:
    """Format a CSV cell at 17 significant digits.

    >>> format_float(0.1)
    '0.10000000000000001'
    >>> format_float(None)
    ''
    """
    if value is None:
        return ""
    return f"{value:.17g}"
