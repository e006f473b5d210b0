"""Named parameter bundles that regenerate the standard figure datasets.

Each preset pins one dataset: cycle size, disorder family, strength
grid, step range, realization count and shift convention.  Grids that
could only be read off plot legends rather than stated outright are
listed in ``inferred`` and echoed into the run manifest.

Position-disorder presets use the symmetric shift convention: with the
literal offset the hopping length acts as a global rotation of the
cycle and provably never changes the coin entropy, so the published
position-disorder entropy curves are only reachable with symmetric
hopping (see the ensemble module notes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .disorder import (
    DisorderModel,
    DYNAMIC_COIN,
    DYNAMIC_PHASE,
    POSITION,
    STATIC_COIN,
    STATIC_PHASE,
    make_model,
)
from .operators import LITERAL, SYMMETRIC

TIME = "time"
STRENGTH = "strength"
PARITY = "parity"

_DECI = tuple(round(0.1 * i, 1) for i in range(11))          # 0.0 .. 1.0
_LEGEND = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
_STRENGTH_TS = (1, 3, 4, 5, 7, 8, 12, 15)
_LAM_TIME = (0.5, 1.5, 3.0)
_LAM_GRID = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
_POSITION_TS = (1, 3, 5, 8, 10, 12, 15)


@dataclass(frozen=True)
class FigurePreset:
    name: str
    kind: str
    k: int
    variant: Optional[str] = None
    strengths: tuple = ()
    ts: tuple = ()
    t_max: int = 15
    n: int = 500
    convention: str = LITERAL
    single_theta: Optional[float] = None
    single_phi: Optional[float] = None
    parity_strengths: dict = field(default_factory=dict)
    notes: str = ""
    inferred: tuple = ()

    def series_models(self) -> list[tuple[str, DisorderModel]]:
        """(label, model) pairs for time and parity presets."""
        if self.kind == TIME:
            out = []
            for s in self.strengths:
                model = (DisorderModel.clean() if self.variant is None or s is None
                         else make_model(self.variant, s))
                out.append((model.label, model))
            return out
        if self.kind == PARITY:
            models = [DisorderModel.clean()]
            for kind_name, strength in self.parity_strengths.items():
                models.append(make_model(kind_name, strength))
            return [(m.label, m) for m in models]
        raise ValueError(f"preset {self.name} has no model series")


def _time_preset(name, k, variant, strengths, convention=LITERAL, notes="", inferred=()):
    return FigurePreset(name=name, kind=TIME, k=k, variant=variant,
                        strengths=tuple(strengths), convention=convention,
                        notes=notes, inferred=tuple(inferred))


def _strength_preset(name, k, variant, strengths, ts, convention=LITERAL,
                     notes="", inferred=(), single=None):
    theta, phi = (single or (None, None))
    return FigurePreset(name=name, kind=STRENGTH, k=k, variant=variant,
                        strengths=tuple(strengths), ts=tuple(ts),
                        t_max=max(ts), convention=convention,
                        single_theta=theta, single_phi=phi,
                        notes=notes, inferred=tuple(inferred))


def _parity_preset(name, k):
    return FigurePreset(
        name=name, kind=PARITY, k=k, convention=SYMMETRIC,
        parity_strengths={STATIC_PHASE: 0.2, DYNAMIC_PHASE: 0.2,
                          STATIC_COIN: 0.2, DYNAMIC_COIN: 0.2, POSITION: 1.5},
        notes="origin-probability traces for all six walk families; the "
              "stated strengths 0.2 / 0.2 / 1.5 are the quoted examples",
        inferred=(),
    )


PRESETS: dict[str, FigurePreset] = {}


def _register(preset: FigurePreset) -> None:
    PRESETS[preset.name] = preset


_register(_time_preset(
    "fig2a", 4, None, (None,),
    notes="clean 4-cycle entanglement recurrence (single deterministic series)"))
_register(_time_preset(
    "fig3a", 4, STATIC_PHASE, _LEGEND,
    notes="4-cycle entropy vs step for six static-phase strengths"))
_register(_strength_preset(
    "fig3b", 4, STATIC_PHASE, _DECI, _STRENGTH_TS,
    inferred=("strengths", "ts"),
    notes="4-cycle entropy vs static-phase strength at selected steps"))
_register(_time_preset(
    "fig4a", 4, DYNAMIC_PHASE, _LEGEND,
    notes="4-cycle entropy vs step for six dynamic-phase strengths"))
_register(_strength_preset(
    "fig4b", 4, DYNAMIC_PHASE, _DECI, _STRENGTH_TS,
    inferred=("strengths", "ts"),
    notes="4-cycle entropy vs dynamic-phase strength at selected steps"))
_register(_time_preset(
    "fig5a", 4, POSITION, _LAM_TIME, convention=SYMMETRIC,
    notes="4-cycle entropy vs step for three Poisson hopping means"))
_register(_strength_preset(
    "fig5b", 4, POSITION, _LAM_GRID, _POSITION_TS, convention=SYMMETRIC,
    inferred=("strengths", "ts"),
    notes="4-cycle entropy vs Poisson mean at selected steps"))
_register(_parity_preset("smfig2a", 4))
_register(_parity_preset("smfig2b", 3))
_register(_time_preset(
    "smfig3a", 3, STATIC_PHASE, _LEGEND,
    notes="3-cycle entropy vs step, static phase"))
_register(_strength_preset(
    "smfig3b", 3, STATIC_PHASE, _DECI, _STRENGTH_TS, inferred=("strengths", "ts"),
    notes="3-cycle entropy vs static-phase strength"))
_register(_time_preset(
    "smfig4a", 3, DYNAMIC_PHASE, _LEGEND,
    notes="3-cycle entropy vs step, dynamic phase"))
_register(_strength_preset(
    "smfig4b", 3, DYNAMIC_PHASE, _DECI, _STRENGTH_TS, inferred=("strengths", "ts"),
    notes="3-cycle entropy vs dynamic-phase strength"))
_register(_time_preset(
    "smfig5a", 4, STATIC_COIN, _LEGEND,
    notes="4-cycle entropy vs step, static coin"))
_register(_strength_preset(
    "smfig5b", 4, STATIC_COIN, _DECI, _STRENGTH_TS, inferred=("strengths", "ts"),
    notes="4-cycle entropy vs static-coin strength"))
_register(_time_preset(
    "smfig6a", 3, STATIC_COIN, _LEGEND,
    notes="3-cycle entropy vs step, static coin"))
_register(_strength_preset(
    "smfig6b", 3, STATIC_COIN, _DECI, _STRENGTH_TS, inferred=("strengths", "ts"),
    notes="3-cycle entropy vs static-coin strength"))
_register(_time_preset(
    "smfig7a", 4, DYNAMIC_COIN, _LEGEND,
    notes="4-cycle entropy vs step, dynamic coin"))
_register(_strength_preset(
    "smfig7b", 4, DYNAMIC_COIN, _DECI, _STRENGTH_TS, inferred=("strengths", "ts"),
    notes="4-cycle entropy vs dynamic-coin strength"))
_register(_time_preset(
    "smfig8a", 3, DYNAMIC_COIN, _LEGEND,
    notes="3-cycle entropy vs step, dynamic coin"))
_register(_strength_preset(
    "smfig8b", 3, DYNAMIC_COIN, _DECI, _STRENGTH_TS, inferred=("strengths", "ts"),
    notes="3-cycle entropy vs dynamic-coin strength"))
_register(_time_preset(
    "smfig10a", 3, POSITION, _LAM_TIME, convention=SYMMETRIC,
    notes="3-cycle entropy vs step, Poisson hopping"))
_register(_strength_preset(
    "smfig10b", 3, POSITION, _LAM_GRID, _POSITION_TS, convention=SYMMETRIC,
    inferred=("strengths", "ts"),
    notes="3-cycle entropy vs Poisson mean at selected steps"))
_register(_strength_preset(
    "smfig11", 4, STATIC_COIN, _DECI, (1,),
    single=(np.pi / 2, np.pi / 2),
    notes="first-step entropy vs static-coin strength for the "
          "phase-symmetric initial state; stays pinned at 1",
))


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ValueError(f"unknown figure preset {name!r}; known presets: {known}") from None
