from __future__ import annotations

from horizon.lib.schema import BaseModel

__all__ = ["Chart", "Series"]


class Series(BaseModel):
    """One line of a chart; `None` ordinates are unconverged points."""

    label: str
    points: list[tuple[float, float | None]]
    dashed: bool = False


class Chart(BaseModel):
    title: str
    x_label: str
    y_label: str
    series: list[Series]
    log_x: bool = True
    log_y: bool = False
    y_min: float | None = None
    y_max: float | None = None
    width: int = 720
    height: int = 480
