"""Offline renderer for cyclewalk sweep CSVs: SVG/PNG line figures with
error bars, one polyline per data series."""

from .chart import ChartGeometry, build_chart
from .render import PlotSpec, render, to_svg
from .tables import PlotData, Series, TableError, load_csv

__version__ = "0.1.0"

__all__ = [
    "ChartGeometry",
    "PlotData",
    "PlotSpec",
    "Series",
    "TableError",
    "build_chart",
    "load_csv",
    "render",
    "to_svg",
    "__version__",
]
