"""SVG 1.1 line charts rendered from a jinja2 template.

Every coordinate is written with two fixed decimals, so equal inputs give
byte-identical files.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

from horizon.lib import settings

from .schemas import Chart, Series

if TYPE_CHECKING:
    from collections.abc import Iterable
    from pathlib import Path

    from horizon.domain.sweep.schemas import SweepRecord

__all__ = ["bounds_chart", "fidelity_chart", "render_svg", "unruh_chart", "write_svg"]

TEMPLATE_NAME = "chart.svg.j2"
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
MARGIN_LEFT = 70
MARGIN_RIGHT = 150
MARGIN_TOP = 40
MARGIN_BOTTOM = 50
MAX_LOG_TICKS = 10


@lru_cache
def environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(settings.app.TEMPLATES_DIR),
        autoescape=select_autoescape(enabled_extensions=("svg", "j2")),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )


def _fmt(value: float) -> str:
    return f"{value:.2f}"


@dataclass
class _Axis:
    lo: float
    hi: float
    log: bool
    start: float
    stop: float

    def _t(self, value: float) -> float:
        return math.log10(value) if self.log else value

    def __call__(self, value: float) -> float:
        lo, hi = self._t(self.lo), self._t(self.hi)
        return self.start + (self._t(value) - lo) / (hi - lo) * (self.stop - self.start)

    def ticks(self) -> list[dict[str, str]]:
        if self.log:
            first, last = math.ceil(math.log10(self.lo) - 1e-9), math.floor(math.log10(self.hi) + 1e-9)
            stride = max(1, math.ceil((last - first + 1) / MAX_LOG_TICKS))
            exponents = range(first, last + 1, stride)
            values = [10.0**k for k in exponents]
            labels = [f"1e{k}" for k in exponents]
        else:
            raw = (self.hi - self.lo) / 5.0
            base = 10.0 ** math.floor(math.log10(raw))
            step = next(m * base for m in (1.0, 2.0, 5.0, 10.0) if m * base >= raw)
            first = math.ceil(self.lo / step - 1e-9)
            values = [k * step for k in range(first, math.floor(self.hi / step + 1e-9) + 1)]
            labels = [f"{v:.10g}" for v in values]
        return [{"pos": _fmt(self(v)), "label": label} for v, label in zip(values, labels)]


def _range(values: list[float], log: bool, lo: float | None, hi: float | None) -> tuple[float, float]:
    lo = min(values) if lo is None else lo
    hi = max(values) if hi is None else hi
    if hi > lo:
        return lo, hi
    return (lo / 10.0, hi * 10.0) if log else (lo - 0.5, hi + 0.5)


def _usable(value: float | None, log: bool) -> bool:
    return value is not None and math.isfinite(value) and (value > 0 or not log)


def _segments(series: Series, x_axis: _Axis, y_axis: _Axis, log_y: bool) -> list[dict[str, Any]]:
    segments: list[list[tuple[str, str]]] = [[]]
    for x, y in series.points:
        if y is None:
            if segments[-1]:
                segments.append([])
            continue
        if _usable(y, log_y):
            segments[-1].append((_fmt(x_axis(x)), _fmt(y_axis(y))))
    return [
        {"single": seg[0] if len(seg) == 1 else None, "points": " ".join(f"{x},{y}" for x, y in seg)}
        for seg in segments
        if seg
    ]


def render_svg(chart: Chart) -> str:
    """Render `chart`; unconverged points break their line and get a marker."""
    xs = [x for s in chart.series for x, _ in s.points if _usable(x, chart.log_x)]
    ys = [y for s in chart.series for _, y in s.points if y is not None and _usable(y, chart.log_y)]
    if not xs or not ys:
        xs, ys = xs or [1.0], ys or [1.0]
    left, top = MARGIN_LEFT, MARGIN_TOP
    right, bottom = chart.width - MARGIN_RIGHT, chart.height - MARGIN_BOTTOM
    x_axis = _Axis(*_range(xs, chart.log_x, None, None), chart.log_x, left, right)
    y_axis = _Axis(*_range(ys, chart.log_y, chart.y_min, chart.y_max), chart.log_y, bottom, top)
    gaps = sorted({x for s in chart.series for x, y in s.points if y is None})
    series_list = [
        {
            "label": s.label,
            "color": PALETTE[i % len(PALETTE)],
            "dashed": s.dashed,
            "segments": _segments(s, x_axis, y_axis, chart.log_y),
        }
        for i, s in enumerate(chart.series)
    ]
    return environment().get_template(TEMPLATE_NAME).render(
        title=chart.title,
        x_label=chart.x_label,
        y_label=chart.y_label,
        width=chart.width,
        height=chart.height,
        title_x=(left + right) // 2,
        plot={
            "left": left,
            "right": right,
            "top": top,
            "bottom": bottom,
            "width": right - left,
            "height": bottom - top,
            "middle": (top + bottom) // 2,
            "tick_label_x": left - 6,
            "tick_label_y": bottom + 16,
        },
        x_ticks=x_axis.ticks(),
        y_ticks=y_axis.ticks(),
        series_list=series_list,
        gaps=[_fmt(x_axis(x)) for x in gaps],
        legend={"x": right + 12, "y": top + 10},
    )


def write_svg(chart: Chart, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(chart), encoding="utf-8")
    return path


def _s_values(records: list[SweepRecord]) -> list[float]:
    return sorted({r.s for r in records})


def fidelity_chart(records: Iterable[SweepRecord]) -> Chart:
    """F against a, one line per squeezing value."""
    records = sorted(records, key=lambda r: r.a)
    series = [
        Series(
            label=f"s = {s:g}",
            points=[(r.a, r.result.fidelity if r.ok and r.result else None) for r in records if r.s == s],
        )
        for s in _s_values(records)
    ]
    return Chart(title="Fidelity", x_label="a L / c²", y_label="F", series=series, y_max=1.0)


def bounds_chart(records: Iterable[SweepRecord], s: float) -> Chart:
    """Lower and upper bound on the minimum error probability against a."""
    curve = sorted((r for r in records if r.s == s), key=lambda r: r.a)
    return Chart(
        title=f"Error probability bounds, s = {s:g}",
        x_label="a L / c²",
        y_label="p_e",
        series=[
            Series(label="F₊", points=[(r.a, r.result.f_plus if r.ok and r.result else None) for r in curve]),
            Series(
                label="F₋",
                points=[(r.a, r.result.f_minus if r.ok and r.result else None) for r in curve],
                dashed=True,
            ),
        ],
        y_min=0.0,
        y_max=0.5,
    )


def unruh_chart(records: Iterable[SweepRecord]) -> Chart:
    """⟨n̂⟩_U against a on log-log axes, one point per acceleration."""
    by_a: dict[float, float | None] = {}
    for r in records:
        ok = r.overlaps is not None and r.overlaps.converged
        if by_a.get(r.a) is None:
            by_a[r.a] = r.overlaps.n_unruh if ok and r.overlaps is not None else None
    return Chart(
        title="Unruh particles",
        x_label="a L / c²",
        y_label="⟨n⟩_U",
        series=[Series(label="⟨n⟩_U", points=sorted(by_a.items()))],
        log_y=True,
    )
