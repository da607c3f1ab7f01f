"""General utility functions."""
from __future__ import annotations

import math
import pkgutil
from functools import lru_cache
from importlib.machinery import SourceFileLoader
from pathlib import Path

__all__ = [
    "geometric_grid",
    "module_to_os_path",
]


@lru_cache
def module_to_os_path(dotted_path: str = "horizon") -> Path:
    """Find Module to OS Path.

    Return path to the base directory of the project or the module
    specified by `dotted_path`.

    Ensures that pkgutil returns a valid source file loader.
    """
    src = pkgutil.get_loader(dotted_path)
    if not isinstance(src, SourceFileLoader):
        raise TypeError("Couldn't find the path for %s", dotted_path)
    return Path(str(src.path).removesuffix("/__init__.py"))


def geometric_grid(lo: float, hi: float, points: int) -> list[float]:
    """Log-spaced grid from `lo` to `hi` inclusive.

    Args:
        lo: first point, > 0
        hi: last point, >= lo
        points: number of points, >= 1

    Returns:
        The grid as python floats, endpoints exact.
    """
    if points == 1:
        return [lo]
    step = (math.log(hi) - math.log(lo)) / (points - 1)
    grid = [math.exp(math.log(lo) + i * step) for i in range(points)]
    grid[0], grid[-1] = lo, hi
    return grid
