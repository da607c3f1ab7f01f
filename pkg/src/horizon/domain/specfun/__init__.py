"""Special functions of the mode overlaps and thermal occupations."""
from . import schemas, services

__all__ = ["schemas", "services"]
