"""Disorder models and reproducible sampling of per-run realizations.

A realization freezes every random ingredient of one walk: per-site
phases (static phase disorder), per-step phases (dynamic), per-site or
per-step coin parameters, or per-step Poisson hopping lengths.  Samples
are a pure function of (model, k, t_max, seed), so a stored realization
replays bit-identically.

Ensemble members draw their seeds from ``derive_subseed``, a splitmix64
round applied to (master_seed, index).  The mixing constants are fixed
so the stream contract is stable across releases of this package;
bit-exact agreement with other generators is not a goal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

POISSON_LAMBDA_MAX = 30.0

CLEAN = "clean"
STATIC_PHASE = "static-phase"
DYNAMIC_PHASE = "dynamic-phase"
STATIC_COIN = "static-coin"
DYNAMIC_COIN = "dynamic-coin"
POSITION = "position"

MODEL_KINDS = (CLEAN, STATIC_PHASE, DYNAMIC_PHASE, STATIC_COIN, DYNAMIC_COIN, POSITION)
PHASE_KINDS = (STATIC_PHASE, DYNAMIC_PHASE)
COIN_KINDS = (STATIC_COIN, DYNAMIC_COIN)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class DisorderModel:
    """Tagged disorder specification.

    kind      : one of MODEL_KINDS.
    delta     : phase-disorder strength in units of pi, in [0, 1].
    omega     : coin-disorder strength, in [0, 1].
    lam       : Poisson mean of the hopping length, in (0, 30].

    Exactly the parameter matching the kind is set; clean carries none.
    """

    kind: str
    delta: Optional[float] = None
    omega: Optional[float] = None
    lam: Optional[float] = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown disorder kind {self.kind!r}; expected one of {MODEL_KINDS}")
        expected = {
            CLEAN: (),
            STATIC_PHASE: ("delta",),
            DYNAMIC_PHASE: ("delta",),
            STATIC_COIN: ("omega",),
            DYNAMIC_COIN: ("omega",),
            POSITION: ("lam",),
        }[self.kind]
        for name in ("delta", "omega", "lam"):
            value = getattr(self, name)
            if name in expected:
                if value is None:
                    raise ValueError(f"{self.kind} model requires parameter {name}")
            elif value is not None:
                raise ValueError(f"{self.kind} model does not take parameter {name}")
        if self.delta is not None and not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1] (units of pi), got {self.delta}")
        if self.omega is not None and not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        if self.lam is not None and not 0.0 < self.lam <= POISSON_LAMBDA_MAX:
            raise ValueError(
                f"lambda must lie in (0, {POISSON_LAMBDA_MAX}], got {self.lam}")

    @classmethod
    def clean(cls) -> "DisorderModel":
        return cls(kind=CLEAN)

    @classmethod
    def static_phase(cls, delta: float) -> "DisorderModel":
        return cls(kind=STATIC_PHASE, delta=delta)

    @classmethod
    def dynamic_phase(cls, delta: float) -> "DisorderModel":
        return cls(kind=DYNAMIC_PHASE, delta=delta)

    @classmethod
    def static_coin(cls, omega: float) -> "DisorderModel":
        return cls(kind=STATIC_COIN, omega=omega)

    @classmethod
    def dynamic_coin(cls, omega: float) -> "DisorderModel":
        return cls(kind=DYNAMIC_COIN, omega=omega)

    @classmethod
    def position(cls, lam: float) -> "DisorderModel":
        return cls(kind=POSITION, lam=lam)

    @property
    def strength(self) -> Optional[float]:
        for value in (self.delta, self.omega, self.lam):
            if value is not None:
                return value
        return None

    @property
    def label(self) -> str:
        """Short series label, e.g. 'delta=0.5' or 'clean'."""
        if self.kind == CLEAN:
            return CLEAN
        name = {"delta": self.delta, "omega": self.omega, "lambda": self.lam}
        key = "delta" if self.kind in PHASE_KINDS else ("omega" if self.kind in COIN_KINDS else "lambda")
        return f"{self.kind}:{key}={name[key]:g}"

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for name in ("delta", "omega", "lam"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "DisorderModel":
        return cls(**data)


def make_model(kind: str, strength: Optional[float] = None) -> DisorderModel:
    """Build a model from a kind string and its single strength parameter."""
    if kind == CLEAN:
        if strength not in (None, 0.0):
            raise ValueError("clean model takes no strength parameter")
        return DisorderModel.clean()
    if kind in PHASE_KINDS:
        return DisorderModel(kind=kind, delta=strength)
    if kind in COIN_KINDS:
        return DisorderModel(kind=kind, omega=strength)
    if kind == POSITION:
        return DisorderModel(kind=kind, lam=strength)
    raise ValueError(f"unknown disorder kind {kind!r}")


@dataclass(frozen=True)
class Realization:
    """One frozen draw of all random angles, coins or jumps for a run.

    Only the array matching the model kind is populated.  Static arrays
    have length k (the cycle bounds the walker's spread); dynamic arrays
    have length t_max.
    """

    model: DisorderModel
    seed: int
    site_phases: Optional[np.ndarray] = None
    time_phases: Optional[np.ndarray] = None
    site_coins: Optional[np.ndarray] = None
    time_coins: Optional[np.ndarray] = None
    jumps: Optional[np.ndarray] = None

    _FIELD_BY_KIND = {
        CLEAN: None,
        STATIC_PHASE: "site_phases",
        DYNAMIC_PHASE: "time_phases",
        STATIC_COIN: "site_coins",
        DYNAMIC_COIN: "time_coins",
        POSITION: "jumps",
    }

    def __post_init__(self):
        expected = self._FIELD_BY_KIND[self.model.kind]
        for name in ("site_phases", "time_phases", "site_coins", "time_coins", "jumps"):
            value = getattr(self, name)
            if name == expected:
                if value is None:
                    raise ValueError(f"{self.model.kind} realization requires {name}")
                arr = np.asarray(value)
                arr = arr.copy()
                arr.flags.writeable = False
                object.__setattr__(self, name, arr)
            elif value is not None:
                raise ValueError(f"{self.model.kind} realization must not carry {name}")
        if self.site_phases is not None or self.time_phases is not None:
            phases = self.site_phases if self.site_phases is not None else self.time_phases
            hi = self.model.delta * np.pi
            if np.any(phases < 0.0) or np.any(phases > hi + 1e-12):
                raise ValueError("phases outside [0, delta*pi]")
        for coins in (self.site_coins, self.time_coins):
            if coins is not None and (np.any(coins < 0.0) or np.any(coins > 1.0)):
                raise ValueError("coin parameters outside [0, 1]")
        if self.jumps is not None and np.any(self.jumps < 0):
            raise ValueError("hopping lengths must be non-negative")

    @property
    def steps_covered(self) -> Optional[int]:
        """Number of steps this realization can drive (None if unlimited)."""
        for arr in (self.time_phases, self.time_coins, self.jumps):
            if arr is not None:
                return len(arr)
        return None

    def to_json(self) -> str:
        payload = {"model": self.model.to_dict(), "seed": self.seed}
        for name in ("site_phases", "time_phases", "site_coins", "time_coins", "jumps"):
            value = getattr(self, name)
            if value is not None:
                payload[name] = value.tolist()
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "Realization":
        payload = json.loads(text)
        model = DisorderModel.from_dict(payload.pop("model"))
        seed = payload.pop("seed")
        arrays = {
            name: np.asarray(value, dtype=(int if name == "jumps" else float))
            for name, value in payload.items()
        }
        return cls(model=model, seed=seed, **arrays)


def derive_subseed(master_seed: int, realization_index: int) -> int:
    """Mix (master_seed, index) into an independent 64-bit stream seed.

    The splitmix64 sequence: advance the state by the golden-gamma times
    (index + 1), then apply the avalanche finalizer.  Injective in the
    index for a fixed master seed because the gamma is odd.
    """
    z = (master_seed + (realization_index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def poisson_sample(lam: float, rng: np.random.Generator) -> int:
    """One Poisson(lam) draw by Knuth's product-of-uniforms method.

    Exact for the mass function lam^b e^-lam / b!; runtime grows with
    lam, so lam is capped at POISSON_LAMBDA_MAX (ample for the hopping
    lengths explored here).
    """
    if not 0.0 < lam <= POISSON_LAMBDA_MAX:
        raise ValueError(f"lambda must lie in (0, {POISSON_LAMBDA_MAX}], got {lam}")
    threshold = np.exp(-lam)
    count = 0
    product = rng.random()
    while product > threshold:
        count += 1
        product *= rng.random()
    return count


def sample_realization(model: DisorderModel, k: int, t_max: int, seed: int) -> Realization:
    """Draw one realization; deterministic in (model, k, t_max, seed).

    Draw protocol (fixed): uniforms are taken as a single block from a
    PCG64 generator seeded with ``seed``; Poisson jumps are drawn
    sequentially from the same generator.
    """
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if k < 3:
        raise ValueError(f"cycle size k must be >= 3, got {k}")
    rng = np.random.default_rng(seed)
    kind = model.kind
    if kind == CLEAN:
        return Realization(model=model, seed=seed)
    if kind == STATIC_PHASE:
        return Realization(model=model, seed=seed,
                           site_phases=rng.uniform(0.0, model.delta * np.pi, size=k))
    if kind == DYNAMIC_PHASE:
        return Realization(model=model, seed=seed,
                           time_phases=rng.uniform(0.0, model.delta * np.pi, size=t_max))
    if kind == STATIC_COIN:
        draws = rng.uniform(-1.0, 1.0, size=k)
        return Realization(model=model, seed=seed,
                           site_coins=0.5 * (1.0 + model.omega * draws))
    if kind == DYNAMIC_COIN:
        draws = rng.uniform(-1.0, 1.0, size=t_max)
        return Realization(model=model, seed=seed,
                           time_coins=0.5 * (1.0 + model.omega * draws))
    if kind == POSITION:
        jumps = np.array([poisson_sample(model.lam, rng) for _ in range(t_max)], dtype=int)
        return Realization(model=model, seed=seed, jumps=jumps)
    raise ValueError(f"unknown disorder kind {kind!r}")
