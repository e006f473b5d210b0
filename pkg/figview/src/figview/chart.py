"""Figure geometry: scales, ticks and pixel paths, backend-independent.

Everything the two backends draw is computed here once, so the SVG and
PNG outputs always agree on layout and the SVG stays deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .tables import PlotData

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)

WIDTH = 640
HEIGHT = 440
MARGIN_LEFT = 70
MARGIN_RIGHT = 18
MARGIN_TOP = 34
MARGIN_BOTTOM = 52


@dataclass(frozen=True)
class SeriesGeometry:
    label: str
    color: str
    points: tuple          # ((px, py), ...)
    error_bars: tuple      # ((px, py_low, py_high), ...), only where err > 0


@dataclass(frozen=True)
class ChartGeometry:
    width: int
    height: int
    frame: tuple           # (x0, y0, x1, y1)
    x_ticks: tuple         # ((px, label), ...)
    y_ticks: tuple         # ((py, label), ...)
    x_label: str
    y_label: str
    title: str
    series: tuple = field(default=())
    warning: str = ""


def nice_ticks(lo: float, hi: float, target: int = 6) -> list:
    """Tick positions on a 1-2-5 ladder covering [lo, hi]."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target, 2)
    power = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * power
        if raw <= step:
            break
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(value) < 1e-12 else value)
        value += step
    return ticks


def _format_tick(value: float) -> str:
    return f"{value:g}"


def build_chart(data: PlotData, title: str = "") -> ChartGeometry:
    """Map the plot data onto pixel space with ticks and a legend order."""
    frame = (MARGIN_LEFT, MARGIN_TOP, WIDTH - MARGIN_RIGHT, HEIGHT - MARGIN_BOTTOM)

    xs = [x for s in data.series for x in s.x]
    tops = [y + e for s in data.series for y, e in zip(s.y, s.yerr)]
    bottoms = [y - e for s in data.series for y, e in zip(s.y, s.yerr)]
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0.0, 1.0)
    if x_hi <= x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_lo = min(0.0, min(bottoms)) if bottoms else 0.0
    y_hi = max(1.0, max(tops)) if tops else 1.0

    def to_px(x):
        return frame[0] + (x - x_lo) / (x_hi - x_lo) * (frame[2] - frame[0])

    def to_py(y):
        return frame[3] - (y - y_lo) / (y_hi - y_lo) * (frame[3] - frame[1])

    x_ticks = tuple((to_px(v), _format_tick(v)) for v in nice_ticks(x_lo, x_hi))
    y_ticks = tuple((to_py(v), _format_tick(v)) for v in nice_ticks(y_lo, y_hi))

    series = []
    for i, s in enumerate(data.series):
        points = tuple((to_px(x), to_py(y)) for x, y in zip(s.x, s.y))
        bars = tuple(
            (to_px(x), to_py(y - e), to_py(y + e))
            for x, y, e in zip(s.x, s.y, s.yerr) if e > 0.0
        )
        series.append(SeriesGeometry(label=s.label, color=PALETTE[i % len(PALETTE)],
                                     points=points, error_bars=bars))

    return ChartGeometry(
        width=WIDTH,
        height=HEIGHT,
        frame=frame,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        x_label=data.x_label,
        y_label=data.y_label,
        title=title,
        series=tuple(series),
        warning="" if data.series else "no data rows: empty axes",
    )
