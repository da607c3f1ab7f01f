"""Truncated Fock space brute force for the covariance block algebra."""
from . import schemas, services

__all__ = ["schemas", "services"]
