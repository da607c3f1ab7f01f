"""Minkowski and Rindler mode building blocks."""
from . import schemas, services

__all__ = ["schemas", "services"]
