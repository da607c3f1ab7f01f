"""Numerical domain modules, one sub-package per stage of the pipeline."""
from __future__ import annotations

from . import fock, gaussian, modes, overlaps, plots, quadrature, specfun, sweep, validation

__all__ = ["fock", "gaussian", "modes", "overlaps", "plots", "quadrature", "specfun", "sweep", "validation"]
