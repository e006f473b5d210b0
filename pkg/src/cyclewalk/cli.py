"""Command-line front end: configuration, sweeps, presets, verification.

Commands
--------
evolve          dump the state trajectory of one walk as JSON
sweep-time      realization-averaged observables vs step, CSV/JSON
sweep-strength  realization-averaged entropy over a strength grid
parity          origin-probability trace plus parity diagnostics
verify          run the analytic verification battery (exit 1 on failure)
figure          run a named figure preset

Every data file is accompanied by a ``<name>.manifest.json`` recording
the fully resolved configuration; re-running a command with
``--config <manifest>`` regenerates the data file byte for byte.
Flags override config-file values.  The environment variable
``CYCLEWALK_OUTDIR`` sets the directory used when ``--out`` is omitted.

CSV schemas (headers are part of the interface):
  time sweeps / parity : series,t,mean_E_av,se_E_av,mean_P0,n_real,seed
  strength sweeps      : strength,t,mean_E_av,se_E_av
Floats are serialized with 17 significant digits; rows are sorted by
(series, t) or (strength, t).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analytic import verify_all
from .disorder import (
    CLEAN,
    COIN_KINDS,
    MODEL_KINDS,
    PHASE_KINDS,
    POSITION,
    DisorderModel,
    derive_subseed,
    make_model,
    sample_realization,
)
from .ensemble import (
    EnsembleResult,
    QuadratureSpec,
    SingleInitial,
    StrengthSweep,
    ensemble_average,
    evolve_state,
    parity_profile,
    sweep_strength,
)
from .operators import CONVENTIONS, LITERAL
from .presets import PARITY, STRENGTH, TIME, get_preset
from .state import InitialStateParams, entanglement_entropy, reduced_coin_density

TIME_SCHEMA = ("series", "t", "mean_E_av", "se_E_av", "mean_P0", "n_real", "seed")
STRENGTH_SCHEMA = ("strength", "t", "mean_E_av", "se_E_av")

OUTDIR_ENV = "CYCLEWALK_OUTDIR"

COMMANDS = ("evolve", "sweep-time", "sweep-strength", "parity", "verify", "figure")

DEFAULTS = {
    "k": 4,
    "t_max": 15,
    "n_realizations": 500,
    "master_seed": 42,
    "nodes": 201,
    "theta": float(np.pi / 2),
    "phi": float(np.pi / 2),
    "mode": "averaged",
    "format": "csv",
    "shift_convention": LITERAL,
}


class UsageError(Exception):
    """Invalid or contradictory configuration; exits with code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration; echoed verbatim into manifests."""

    command: str
    k: int = 4
    t_max: int = 15
    model_kind: Optional[str] = None
    strength: Optional[float] = None
    mode: str = "averaged"
    theta: float = DEFAULTS["theta"]
    phi: float = DEFAULTS["phi"]
    nodes: int = 201
    n_realizations: Optional[int] = 500  # None defers to a preset's own count
    master_seed: int = 42
    shift_convention: str = LITERAL
    out: Optional[str] = None
    format: str = "csv"
    preset: Optional[str] = None
    strengths: Optional[tuple] = None
    ts: Optional[tuple] = None

    def to_dict(self) -> dict:
        out = {}
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if isinstance(value, tuple):
                value = list(value)
            out[name] = value
        return out

    def model(self) -> DisorderModel:
        if self.model_kind is None:
            raise UsageError(f"command {self.command!r} requires --model")
        return make_model(self.model_kind, self.strength)

    def initial(self):
        if self.mode == "single":
            return SingleInitial(theta=self.theta, phi=self.phi)
        return QuadratureSpec(nodes=self.nodes, phi=self.phi)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimeSweepTable:
    """Rows of the time-sweep CSV schema."""

    rows: tuple = ()
    schema = TIME_SCHEMA

    @classmethod
    def from_results(cls, series: Sequence[tuple[str, EnsembleResult]]) -> "TimeSweepTable":
        rows = []
        for label, result in series:
            for i, t in enumerate(result.steps):
                rows.append((label, int(t),
                             float(result.mean_e_av[i]), float(result.se_e_av[i]),
                             float(result.mean_p0[i]), result.n_realizations,
                             result.master_seed))
        return cls(rows=tuple(sorted(rows, key=lambda r: (r[0], r[1]))))


@dataclass(frozen=True)
class StrengthTable:
    """Rows of the strength-sweep CSV schema."""

    rows: tuple = ()
    schema = STRENGTH_SCHEMA

    @classmethod
    def from_sweep(cls, sweep: StrengthSweep) -> "StrengthTable":
        rows = []
        for i, s in enumerate(sweep.strengths):
            for j, t in enumerate(sweep.ts):
                rows.append((float(s), int(t), float(sweep.mean[i, j]), float(sweep.se[i, j])))
        return cls(rows=tuple(sorted(rows, key=lambda r: (r[0], r[1]))))


def _format_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_table(table, path: Path, fmt: str) -> None:
    """Serialize a table; CSV bytes are deterministic for identical rows."""
    if fmt == "csv":
        lines = [",".join(table.schema)]
        lines += [",".join(_format_cell(v) for v in row) for row in table.rows]
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        records = [dict(zip(table.schema, row)) for row in table.rows]
        path.write_text(json.dumps(records, indent=2) + "\n")
    else:
        raise UsageError(f"unknown output format {fmt!r}")


def read_table_csv(path: Path):
    """Parse a CSV written by write_table back into typed rows."""
    lines = path.read_text().splitlines()
    header = tuple(lines[0].split(","))
    if header == TIME_SCHEMA:
        caster = (str, int, float, float, float, int, int)
        make = TimeSweepTable
    elif header == STRENGTH_SCHEMA:
        caster = (float, int, float, float)
        make = StrengthTable
    else:
        raise ValueError(f"unrecognized CSV header in {path}")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        rows.append(tuple(cast(cell) for cast, cell in zip(caster, cells)))
    return make(rows=tuple(rows))


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None,
                   help="JSON config file or a previous run's manifest")
    p.add_argument("--out", default=None, help="output data file")
    p.add_argument("--format", choices=["csv", "json"], default=None, dest="fmt")
    p.add_argument("--seed", type=int, default=None, dest="master_seed")
    p.add_argument("--shift-convention", choices=list(CONVENTIONS), default=None,
                   dest="shift_convention")


def _add_ensemble(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--steps", type=int, default=None, dest="t_max")
    p.add_argument("--n", type=int, default=None, dest="n_realizations")
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--mode", choices=["averaged", "single"], default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--phi", type=float, default=None)


def _add_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=list(MODEL_KINDS), default=None, dest="model_kind")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--lambda", type=float, default=None, dest="lam")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclewalk",
        description="Cyclic quantum walks under disorder: entanglement sweeps and diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="dump one walk's state trajectory as JSON")
    _add_common(p)
    _add_model(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--steps", type=int, default=None, dest="t_max")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--phi", type=float, default=None)

    p = sub.add_parser("sweep-time", help="averaged observables vs step")
    _add_common(p)
    _add_ensemble(p)
    _add_model(p)

    p = sub.add_parser("sweep-strength", help="averaged entropy over a strength grid")
    _add_common(p)
    _add_ensemble(p)
    p.add_argument("--model", choices=[k for k in MODEL_KINDS if k != CLEAN],
                   default=None, dest="model_kind")
    p.add_argument("--strengths", type=_float_list, default=None)
    p.add_argument("--ts", type=_int_list, default=None)

    p = sub.add_parser("parity", help="origin probability and parity diagnostics")
    _add_common(p)
    _add_ensemble(p)
    _add_model(p)

    p = sub.add_parser("verify", help="analytic verification battery")
    _add_common(p)

    p = sub.add_parser("figure", help="run a named figure preset")
    _add_common(p)
    p.add_argument("--preset", default=None)
    p.add_argument("--n", type=int, default=None, dest="n_realizations")
    p.add_argument("--nodes", type=int, default=None)

    return parser


def _load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]  # manifest: the resolved config is nested
    return data


_FILE_KEYS = {
    "command", "k", "t_max", "model_kind", "strength", "mode", "theta", "phi",
    "nodes", "n_realizations", "master_seed", "shift_convention", "out",
    "format", "preset", "strengths", "ts", "delta", "omega", "lam",
}


def parse_config(argv: Sequence[str], config_file: Optional[str] = None) -> RunConfig:
    """Resolve argv plus an optional config file into a RunConfig.

    Precedence: command-line flag, then config-file value, then the
    built-in default.  Unknown config-file keys are rejected.
    """
    parser = _build_parser()
    ns = parser.parse_args(list(argv))
    command = ns.command

    file_cfg: dict = {}
    path = getattr(ns, "config", None) or config_file
    if path:
        file_cfg = _load_config_file(path)
        unknown = set(file_cfg) - _FILE_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if file_cfg.get("command") not in (None, command):
            raise UsageError(
                f"config file was written for command {file_cfg['command']!r}, "
                f"not {command!r}")

    def pick(flag_name, file_name, default):
        value = getattr(ns, flag_name, None)
        if value is not None:
            return value
        if file_name in file_cfg and file_cfg[file_name] is not None:
            return file_cfg[file_name]
        return default

    model_kind = pick("model_kind", "model_kind", None)
    strength = _resolve_strength(ns, file_cfg, model_kind)

    strengths = pick("strengths", "strengths", None)
    ts = pick("ts", "ts", None)
    # The figure command defers an unset realization count to its preset.
    n_default = None if command == "figure" else DEFAULTS["n_realizations"]
    n_value = pick("n_realizations", "n_realizations", n_default)
    config = RunConfig(
        command=command,
        k=int(pick("k", "k", DEFAULTS["k"])),
        t_max=int(pick("t_max", "t_max", DEFAULTS["t_max"])),
        model_kind=model_kind,
        strength=strength,
        mode=pick("mode", "mode", DEFAULTS["mode"]),
        theta=float(pick("theta", "theta", DEFAULTS["theta"])),
        phi=float(pick("phi", "phi", DEFAULTS["phi"])),
        nodes=int(pick("nodes", "nodes", DEFAULTS["nodes"])),
        n_realizations=int(n_value) if n_value is not None else None,
        master_seed=int(pick("master_seed", "master_seed", DEFAULTS["master_seed"])),
        shift_convention=pick("shift_convention", "shift_convention",
                              DEFAULTS["shift_convention"]),
        out=pick("out", "out", None),
        format=pick("fmt", "format", DEFAULTS["format"]),
        preset=pick("preset", "preset", None),
        strengths=tuple(strengths) if strengths is not None else None,
        ts=tuple(int(t) for t in ts) if ts is not None else None,
    )
    _validate(config)
    return config


def _resolve_strength(ns, file_cfg: dict, model_kind: Optional[str]) -> Optional[float]:
    given = {}
    for name in ("delta", "omega", "lam"):
        value = getattr(ns, name, None)
        if value is None and file_cfg.get(name) is not None:
            value = file_cfg[name]
        if value is not None:
            given[name] = float(value)
    if file_cfg.get("strength") is not None and not given:
        return float(file_cfg["strength"])
    if not given:
        return None
    if len(given) > 1:
        raise UsageError(f"multiple strength parameters given: {sorted(given)}")
    name, value = next(iter(given.items()))
    expected = {"delta": PHASE_KINDS, "omega": COIN_KINDS, "lam": (POSITION,)}[name]
    if model_kind not in expected:
        flag = {"delta": "--delta", "omega": "--omega", "lam": "--lambda"}[name]
        raise UsageError(
            f"{flag} applies to models {list(expected)}, not {model_kind!r}")
    return value


def _validate(cfg: RunConfig) -> None:
    if cfg.command in ("evolve", "sweep-time", "parity", "sweep-strength"):
        if cfg.model_kind is None:
            raise UsageError(f"command {cfg.command!r} requires --model")
        if cfg.command == "sweep-strength":
            if cfg.model_kind == CLEAN:
                raise UsageError("sweep-strength needs a disordered model")
            if not cfg.strengths:
                raise UsageError("sweep-strength requires --strengths")
            if not cfg.ts:
                raise UsageError("sweep-strength requires --ts")
            for s in cfg.strengths:
                _check_strength_value(cfg.model_kind, s)
        elif cfg.model_kind != CLEAN:
            if cfg.strength is None:
                raise UsageError(f"model {cfg.model_kind!r} requires its strength parameter")
            _check_strength_value(cfg.model_kind, cfg.strength)
        elif cfg.strength is not None:
            raise UsageError("clean model takes no strength parameter")
    if cfg.command == "figure" and cfg.preset is None:
        raise UsageError("figure requires --preset")
    if cfg.k < 3:
        raise UsageError(f"k must be >= 3, got {cfg.k}")
    if cfg.t_max < 1:
        raise UsageError(f"steps must be >= 1, got {cfg.t_max}")
    if cfg.n_realizations is not None and cfg.n_realizations < 1:
        raise UsageError(f"n must be >= 1, got {cfg.n_realizations}")
    if cfg.nodes < 3 or cfg.nodes % 2 == 0:
        raise UsageError(f"nodes must be odd and >= 3, got {cfg.nodes}")
    if cfg.shift_convention not in CONVENTIONS:
        raise UsageError(f"shift convention must be one of {CONVENTIONS}")


def _check_strength_value(kind: str, value: float) -> None:
    try:
        make_model(kind, value)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def _default_out(cfg: RunConfig) -> Path:
    stem = cfg.preset if cfg.command == "figure" else cfg.command
    ext = "json" if cfg.command in ("evolve", "verify") else cfg.format
    name = f"{stem}.{ext}"
    outdir = os.environ.get(OUTDIR_ENV)
    return Path(outdir) / name if outdir else Path(name)


def _write_manifest(cfg: RunConfig, data_path: Path, wall_time: float, notes: dict) -> Path:
    manifest_path = data_path.with_suffix(".manifest.json")
    payload = {
        "artifact": {"name": "cyclewalk", "version": __version__},
        "command": cfg.command,
        "config": cfg.to_dict(),
        "outputs": [str(data_path)],
        "wall_time_s": wall_time,
        "notes": notes,
    }
    manifest_path.write_text(json.dumps(payload, indent=2) + "\n")
    return manifest_path


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    started = time.perf_counter()
    if cfg.command == "figure":
        # Resolve the preset's realization count now so the manifest
        # echoes the value the run actually used.
        try:
            preset = get_preset(cfg.preset)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if cfg.n_realizations is None:
            cfg = replace(cfg, n_realizations=preset.n)
        if cfg.shift_convention != preset.convention:
            cfg = replace(cfg, shift_convention=preset.convention)
    out = Path(cfg.out) if cfg.out else _default_out(cfg)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    notes: dict = {}

    try:
        if cfg.command == "verify":
            report = verify_all(seed=cfg.master_seed)
            out.write_text(report.to_json() + "\n")
            _write_manifest(cfg, out, time.perf_counter() - started,
                            {"ok": report.ok})
            print(("verification passed" if report.ok else "verification FAILED")
                  + f"; report at {out}")
            return 0 if report.ok else 1

        if cfg.command == "evolve":
            _run_evolve(cfg, out)
        elif cfg.command == "sweep-time":
            model = cfg.model()
            result = ensemble_average(cfg.k, model, cfg.t_max, cfg.n_realizations,
                                      cfg.master_seed, cfg.initial(), cfg.shift_convention)
            write_table(TimeSweepTable.from_results([(model.label, result)]),
                        out, cfg.format)
        elif cfg.command == "parity":
            model = cfg.model()
            profile = parity_profile(cfg.k, model, cfg.t_max, cfg.n_realizations,
                                     cfg.master_seed, cfg.initial(), cfg.shift_convention)
            write_table(TimeSweepTable.from_results([(model.label, profile.result)]),
                        out, cfg.format)
            notes["parity_violation_score"] = profile.violation_score
            notes["wrong_parity_max"] = profile.wrong_parity_max
        elif cfg.command == "sweep-strength":
            sweep = sweep_strength(cfg.k, cfg.model_kind, cfg.strengths, cfg.ts,
                                   cfg.n_realizations, cfg.master_seed, cfg.initial(),
                                   cfg.shift_convention)
            write_table(StrengthTable.from_sweep(sweep), out, cfg.format)
        elif cfg.command == "figure":
            notes = _run_figure(cfg, out)
        else:
            raise UsageError(f"unknown command {cfg.command!r}")
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 1

    _write_manifest(cfg, out, time.perf_counter() - started, notes)
    print(f"wrote {out}")
    return 0


def _run_evolve(cfg: RunConfig, out: Path) -> None:
    model = cfg.model()
    realization_seed = derive_subseed(cfg.master_seed, 1)
    realization = sample_realization(model, cfg.k, cfg.t_max, realization_seed)
    states = evolve_state(cfg.k, realization, cfg.t_max,
                          InitialStateParams(cfg.theta, cfg.phi), cfg.shift_convention)
    payload = {
        "k": cfg.k,
        "t_max": cfg.t_max,
        "theta": cfg.theta,
        "phi": cfg.phi,
        "model": model.to_dict(),
        "master_seed": cfg.master_seed,
        "realization_seed": realization_seed,
        "shift_convention": cfg.shift_convention,
        "realization": json.loads(realization.to_json()),
        "states": [
            {
                "t": state.t,
                "entropy": entanglement_entropy(reduced_coin_density(state)),
                "p0": float(np.abs(state.grid[0]).dot(np.abs(state.grid[0]))),
                "amplitudes": [
                    {"x": x, "s": s,
                     "re": float(state.grid[x, s].real),
                     "im": float(state.grid[x, s].imag)}
                    for x in range(cfg.k) for s in (0, 1)
                ],
            }
            for state in states
        ],
    }
    out.write_text(json.dumps(payload, indent=2) + "\n")


def _run_figure(cfg: RunConfig, out: Path) -> dict:
    preset = get_preset(cfg.preset)
    n = cfg.n_realizations
    notes = {
        "preset": preset.name,
        "preset_notes": preset.notes,
        "inferred_grids": list(preset.inferred),
        "shift_convention": preset.convention,
        "n_realizations": n,
    }
    if preset.single_theta is not None:
        initial = SingleInitial(theta=preset.single_theta, phi=preset.single_phi)
    else:
        initial = QuadratureSpec(nodes=cfg.nodes, phi=cfg.phi)

    if preset.kind == TIME:
        series = []
        for label, model in preset.series_models():
            result = ensemble_average(preset.k, model, preset.t_max, n,
                                      cfg.master_seed, initial, preset.convention)
            series.append((label, result))
        write_table(TimeSweepTable.from_results(series), out, cfg.format)
    elif preset.kind == PARITY:
        series = []
        scores = {}
        for label, model in preset.series_models():
            profile = parity_profile(preset.k, model, preset.t_max, n,
                                     cfg.master_seed, initial, preset.convention)
            series.append((label, profile.result))
            scores[label] = profile.violation_score
        write_table(TimeSweepTable.from_results(series), out, cfg.format)
        notes["parity_violation_scores"] = scores
    elif preset.kind == STRENGTH:
        sweep = sweep_strength(preset.k, preset.variant, preset.strengths, preset.ts,
                               n, cfg.master_seed, initial, preset.convention)
        write_table(StrengthTable.from_sweep(sweep), out, cfg.format)
    else:
        raise UsageError(f"preset {preset.name} has unknown kind {preset.kind}")
    return notes


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
