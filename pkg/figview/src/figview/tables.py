"""Parsing and validation of the simulator's CSV sweep files.

Three kinds of input are understood, keyed by the plot kind requested:

* ``time-sweep``     one curve per ``series`` value, x = t, y = mean_E_av
* ``parity``         one curve per ``series`` value, x = t, y = mean_P0
* ``strength-sweep`` one curve per t value, x = strength, y = mean_E_av

The renderer never writes to its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

TIME_COLUMNS = ("series", "t", "mean_E_av", "se_E_av", "mean_P0", "n_real", "seed")
STRENGTH_COLUMNS = ("strength", "t", "mean_E_av", "se_E_av")

KIND_TIME = "time-sweep"
KIND_STRENGTH = "strength-sweep"
KIND_PARITY = "parity"
KINDS = (KIND_TIME, KIND_STRENGTH, KIND_PARITY)


class TableError(Exception):
    """Malformed or mismatched input CSV."""


@dataclass(frozen=True)
class Series:
    """One plottable curve: points sorted by x, optional error bars."""

    label: str
    x: tuple
    y: tuple
    yerr: tuple


@dataclass(frozen=True)
class PlotData:
    kind: str
    series: tuple
    x_label: str
    y_label: str

    @property
    def is_empty(self) -> bool:
        return not self.series


def _required_columns(kind: str):
    if kind in (KIND_TIME, KIND_PARITY):
        return TIME_COLUMNS
    if kind == KIND_STRENGTH:
        return STRENGTH_COLUMNS
    raise TableError(f"unknown plot kind {kind!r}; expected one of {KINDS}")


def _parse_float(cell: str, line_no: int, column: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise TableError(
            f"line {line_no}: column {column!r} holds non-numeric value {cell!r}"
        ) from None


def load_csv(path: Path, kind: str) -> PlotData:
    """Read and validate one sweep CSV for the requested plot kind."""
    required = _required_columns(kind)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise TableError(f"{path} is empty (not even a header)")
    header = tuple(lines[0].split(","))
    missing = [c for c in required if c not in header]
    if missing:
        raise TableError(f"{path} is missing required column(s): {', '.join(missing)}")
    index = {name: header.index(name) for name in required}

    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise TableError(
                f"line {line_no}: expected {len(header)} fields, found {len(cells)}")
        rows.append((line_no, cells))

    if kind == KIND_STRENGTH:
        grouped: dict[str, list] = {}
        for line_no, cells in rows:
            t_label = cells[index["t"]]
            grouped.setdefault(t_label, []).append((
                _parse_float(cells[index["strength"]], line_no, "strength"),
                _parse_float(cells[index["mean_E_av"]], line_no, "mean_E_av"),
                _parse_float(cells[index["se_E_av"]], line_no, "se_E_av"),
            ))
        series = tuple(
            _series(f"t={label}", points)
            for label, points in sorted(grouped.items(), key=lambda kv: float(kv[0]))
        )
        return PlotData(kind=kind, series=series, x_label="strength",
                        y_label="<E_av>")

    y_col = "mean_P0" if kind == KIND_PARITY else "mean_E_av"
    err_col = None if kind == KIND_PARITY else "se_E_av"
    grouped = {}
    for line_no, cells in rows:
        label = cells[index["series"]]
        grouped.setdefault(label, []).append((
            _parse_float(cells[index["t"]], line_no, "t"),
            _parse_float(cells[index[y_col]], line_no, y_col),
            _parse_float(cells[index[err_col]], line_no, err_col) if err_col else 0.0,
        ))
    series = tuple(_series(label, points) for label, points in sorted(grouped.items()))
    y_label = "<P_av(x=0)>" if kind == KIND_PARITY else "<E_av>"
    return PlotData(kind=kind, series=series, x_label="t", y_label=y_label)


def _series(label: str, points: list) -> Series:
    points = sorted(points)
    return Series(
        label=label,
        x=tuple(p[0] for p in points),
        y=tuple(p[1] for p in points),
        yerr=tuple(p[2] for p in points),
    )
