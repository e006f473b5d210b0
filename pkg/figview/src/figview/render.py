"""SVG and PNG backends over the shared chart geometry.

The SVG backend writes plain markup with one ``<polyline>`` element per
data series (error bars and axes are ``<line>`` elements), which keeps
the files diffable and lets tests count series structurally.  The PNG
backend draws the same geometry with Pillow.  Output depends only on
the input rows, never on time or environment.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .chart import ChartGeometry, build_chart
from .tables import KINDS, PlotData, TableError, load_csv

FORMATS = ("svg", "png")
CAP_HALF_WIDTH = 3.0


@dataclass(frozen=True)
class PlotSpec:
    """One rendering job: input CSV, plot kind, output image."""

    source: Path
    kind: str
    out: Path
    fmt: Optional[str] = None   # inferred from the output suffix when None
    title: str = ""

    def resolved_format(self) -> str:
        if self.fmt:
            return self.fmt
        suffix = Path(self.out).suffix.lstrip(".").lower()
        if suffix in FORMATS:
            return suffix
        raise TableError(
            f"cannot infer image format from {self.out}; pass --format svg|png")


def render(spec: PlotSpec) -> Path:
    """Render one CSV to one image; returns the output path.

    Header-only inputs produce an empty-axes figure and a warning on
    stderr rather than an error.
    """
    if spec.kind not in KINDS:
        raise TableError(f"unknown plot kind {spec.kind!r}; expected one of {KINDS}")
    fmt = spec.resolved_format()
    data = load_csv(Path(spec.source), spec.kind)
    geometry = build_chart(data, title=spec.title or Path(spec.source).stem)
    if geometry.warning:
        print(f"warning: {spec.source}: {geometry.warning}", file=sys.stderr)
    out = Path(spec.out)
    if fmt == "svg":
        out.write_text(to_svg(geometry))
    else:
        to_png(geometry, out)
    return out


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def to_svg(g: ChartGeometry) -> str:
    x0, y0, x1, y1 = g.frame
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{g.width}" '
        f'height="{g.height}" viewBox="0 0 {g.width} {g.height}">',
        f'<rect x="0" y="0" width="{g.width}" height="{g.height}" fill="white"/>',
        f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(x1 - x0)}" '
        f'height="{_fmt(y1 - y0)}" fill="none" stroke="black"/>',
    ]
    if g.title:
        parts.append(f'<text x="{_fmt((x0 + x1) / 2)}" y="{_fmt(y0 - 12)}" '
                     f'text-anchor="middle" font-size="14">{_escape(g.title)}</text>')
    for px, label in g.x_ticks:
        parts.append(f'<line x1="{_fmt(px)}" y1="{_fmt(y1)}" x2="{_fmt(px)}" '
                     f'y2="{_fmt(y1 + 5)}" stroke="black"/>')
        parts.append(f'<text x="{_fmt(px)}" y="{_fmt(y1 + 18)}" text-anchor="middle" '
                     f'font-size="11">{label}</text>')
    for py, label in g.y_ticks:
        parts.append(f'<line x1="{_fmt(x0 - 5)}" y1="{_fmt(py)}" x2="{_fmt(x0)}" '
                     f'y2="{_fmt(py)}" stroke="black"/>')
        parts.append(f'<text x="{_fmt(x0 - 8)}" y="{_fmt(py + 4)}" text-anchor="end" '
                     f'font-size="11">{label}</text>')
    parts.append(f'<text x="{_fmt((x0 + x1) / 2)}" y="{_fmt(y1 + 36)}" '
                 f'text-anchor="middle" font-size="12">{_escape(g.x_label)}</text>')
    parts.append(f'<text x="18" y="{_fmt((y0 + y1) / 2)}" text-anchor="middle" '
                 f'font-size="12" transform="rotate(-90 18 {_fmt((y0 + y1) / 2)})">'
                 f'{_escape(g.y_label)}</text>')

    for series in g.series:
        for px, lo, hi in series.error_bars:
            parts.append(f'<line x1="{_fmt(px)}" y1="{_fmt(lo)}" x2="{_fmt(px)}" '
                         f'y2="{_fmt(hi)}" stroke="{series.color}"/>')
            for py in (lo, hi):
                parts.append(f'<line x1="{_fmt(px - CAP_HALF_WIDTH)}" y1="{_fmt(py)}" '
                             f'x2="{_fmt(px + CAP_HALF_WIDTH)}" y2="{_fmt(py)}" '
                             f'stroke="{series.color}"/>')
        points = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in series.points)
        parts.append(f'<polyline fill="none" stroke="{series.color}" '
                     f'stroke-width="1.5" points="{points}"/>')

    for i, series in enumerate(g.series):
        ly = y0 + 14 + 15 * i
        parts.append(f'<line x1="{_fmt(x1 - 150)}" y1="{_fmt(ly - 4)}" '
                     f'x2="{_fmt(x1 - 128)}" y2="{_fmt(ly - 4)}" '
                     f'stroke="{series.color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{_fmt(x1 - 124)}" y="{_fmt(ly)}" font-size="11">'
                     f'{_escape(series.label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def to_png(g: ChartGeometry, path: Path) -> None:
    from PIL import Image, ImageDraw

    image = Image.new("RGB", (g.width, g.height), "white")
    draw = ImageDraw.Draw(image)
    x0, y0, x1, y1 = g.frame
    draw.rectangle([x0, y0, x1, y1], outline="black")
    if g.title:
        _centered_text(draw, (x0 + x1) / 2, y0 - 20, g.title)
    for px, label in g.x_ticks:
        draw.line([(px, y1), (px, y1 + 5)], fill="black")
        _centered_text(draw, px, y1 + 9, label)
    for py, label in g.y_ticks:
        draw.line([(x0 - 5, py), (x0, py)], fill="black")
        _centered_text(draw, x0 - 20, py - 5, label)
    _centered_text(draw, (x0 + x1) / 2, y1 + 28, g.x_label)
    _centered_text(draw, x0, y0 - 20, g.y_label)
    for series in g.series:
        for px, lo, hi in series.error_bars:
            draw.line([(px, lo), (px, hi)], fill=series.color)
            for py in (lo, hi):
                draw.line([(px - CAP_HALF_WIDTH, py), (px + CAP_HALF_WIDTH, py)],
                          fill=series.color)
        if len(series.points) > 1:
            draw.line(list(series.points), fill=series.color, width=2)
        elif series.points:
            px, py = series.points[0]
            draw.ellipse([px - 2, py - 2, px + 2, py + 2], fill=series.color)
    for i, series in enumerate(g.series):
        ly = y0 + 10 + 15 * i
        draw.line([(x1 - 150, ly), (x1 - 128, ly)], fill=series.color, width=2)
        draw.text((x1 - 124, ly - 5), series.label, fill="black")
    image.save(path, format="PNG")


def _centered_text(draw, x, y, text):
    box = draw.textbbox((0, 0), text)
    draw.text((x - (box[2] - box[0]) / 2, y), text, fill="black")
