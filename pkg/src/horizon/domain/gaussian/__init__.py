"""Covariance matrices, Gaussian fidelity and error probability bounds."""
from . import schemas, services

__all__ = ["schemas", "services"]
