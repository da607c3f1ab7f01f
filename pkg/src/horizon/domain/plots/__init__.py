"""SVG charts of sweep results."""
from . import schemas, services

__all__ = ["schemas", "services"]
