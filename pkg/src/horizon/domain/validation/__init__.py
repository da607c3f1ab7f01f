"""Internal consistency checks behind `horizon validate`."""
from . import schemas, services

__all__ = ["schemas", "services"]
