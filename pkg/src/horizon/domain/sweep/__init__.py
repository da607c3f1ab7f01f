"""Acceleration/squeezing sweeps and the quantities extracted from them."""
from . import schemas, services

__all__ = ["schemas", "services"]
