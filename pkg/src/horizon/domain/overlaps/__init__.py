"""Rindler spectra of the packets and the scenario overlaps."""
from . import schemas, services

__all__ = ["schemas", "services"]
