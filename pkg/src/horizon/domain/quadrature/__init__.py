"""Adaptive one dimensional quadrature."""
from . import schemas, services

__all__ = ["schemas", "services"]
