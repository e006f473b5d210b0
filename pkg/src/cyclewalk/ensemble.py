"""Quenched ensemble averages, parity and time-cone diagnostics, sweeps.

The observable of interest is the walker's coin-position entanglement
entropy averaged over the initial-state angle theta (composite Simpson
on [0, pi] at fixed phi), then averaged again over independent disorder
realizations.  Realization j of an ensemble draws its seed from
``derive_subseed(master_seed, j)``; accumulation is in realization
order, so results are a deterministic function of the inputs.

All realizations of one ensemble are evolved together through the same
``advance_amplitudes`` kernel, with the batch laid out as
(realization, theta_node, site, coin).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import disorder as dis
from .operators import (
    HADAMARD,
    LITERAL,
    CoinSpec,
    ShiftSpec,
    StepPlan,
    advance_amplitudes,
    coin_matrices,
    coin_matrix,
    step,
)
from .state import (
    WalkerState,
    coin_density_from_amplitudes,
    coin_entropy,
    initial_state,
    InitialStateParams,
    position_distribution,
    position_probability,
)

DEFAULT_NODES = 201
DEFAULT_PHI = np.pi / 2
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite-Simpson rule for the theta average on [0, pi]."""

    nodes: int = DEFAULT_NODES
    phi: float = DEFAULT_PHI

    def __post_init__(self):
        if self.nodes < 3 or self.nodes % 2 == 0:
            raise ValueError(f"Simpson rule needs an odd node count >= 3, got {self.nodes}")


@dataclass(frozen=True)
class SingleInitial:
    """Fixed initial state (no theta average); entropy is reported raw."""

    theta: float
    phi: float = DEFAULT_PHI


InitialSpec = Union[QuadratureSpec, SingleInitial]


@dataclass(frozen=True)
class EnsembleResult:
    """Per-step realization-averaged observables with run metadata.

    ``mean_e_av`` and ``mean_p0`` have one entry per step 1..t_max;
    standard errors use the sample standard deviation over realizations
    (zero for a single realization).  When ``collect_samples`` was
    requested the raw per-realization matrices (n, t_max) are attached.
    """

    model: dis.DisorderModel
    k: int
    t_max: int
    n_realizations: int
    master_seed: int
    mean_e_av: np.ndarray
    se_e_av: np.ndarray
    mean_p0: np.ndarray
    se_p0: np.ndarray
    shift_convention: str = LITERAL
    initial: InitialSpec = QuadratureSpec()
    e_av_samples: Optional[np.ndarray] = field(default=None, repr=False)
    p0_samples: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def steps(self) -> np.ndarray:
        return np.arange(1, self.t_max + 1)


@dataclass(frozen=True)
class ParityProfile:
    """Origin-occupation trace and the odd-even parity diagnostics.

    ``violation_score`` is the largest mean origin probability seen at
    an odd step; zero (to rounding) means parity held.  The score is
    meaningful as a preservation claim only for even k.
    ``wrong_parity_max`` is the worst single-realization probability
    mass on wrong-parity sites across all steps and theta nodes.
    """

    result: EnsembleResult
    violation_score: float
    wrong_parity_max: float


@dataclass(frozen=True)
class StrengthSweep:
    """Grid of realization-averaged entropies over (strength, step)."""

    kind: str
    k: int
    strengths: tuple
    ts: tuple
    mean: np.ndarray
    se: np.ndarray
    n_realizations: int
    master_seed: int
    shift_convention: str
    initial: InitialSpec


def simpson_weights(nodes: int) -> np.ndarray:
    """Composite-Simpson weights for nodes equally spaced on [0, pi]."""
    if nodes < 3 or nodes % 2 == 0:
        raise ValueError(f"Simpson rule needs an odd node count >= 3, got {nodes}")
    h = np.pi / (nodes - 1)
    w = np.ones(nodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def realization_plan(realization: dis.Realization, t: int) -> StepPlan:
    """The StepPlan a realization prescribes for step t (1-based)."""
    if t < 1:
        raise ValueError(f"step index must be >= 1, got {t}")
    covered = realization.steps_covered
    if covered is not None and t > covered:
        raise ValueError(f"realization covers {covered} steps, step {t} requested")
    kind = realization.model.kind
    if kind == dis.CLEAN:
        return StepPlan(coins=HADAMARD, shift=ShiftSpec(jump=1))
    if kind == dis.STATIC_PHASE:
        return StepPlan(coins=HADAMARD, shift=ShiftSpec(jump=1, phase0=realization.site_phases))
    if kind == dis.DYNAMIC_PHASE:
        return StepPlan(coins=HADAMARD,
                        shift=ShiftSpec(jump=1, phase0=float(realization.time_phases[t - 1])))
    if kind == dis.STATIC_COIN:
        return StepPlan(coins=tuple(CoinSpec(float(r)) for r in realization.site_coins),
                        shift=ShiftSpec(jump=1))
    if kind == dis.DYNAMIC_COIN:
        return StepPlan(coins=CoinSpec(float(realization.time_coins[t - 1])),
                        shift=ShiftSpec(jump=1))
    if kind == dis.POSITION:
        return StepPlan(coins=HADAMARD, shift=ShiftSpec(jump=int(realization.jumps[t - 1])))
    raise ValueError(f"unknown disorder kind {kind!r}")


def evolve_state(
    k: int,
    realization: dis.Realization,
    t_max: int,
    params: InitialStateParams,
    convention: str = LITERAL,
) -> list[WalkerState]:
    """Scalar evolution path: states at t = 0..t_max for one realization."""
    states = [initial_state(k, params)]
    for t in range(1, t_max + 1):
        states.append(step(states[-1], realization_plan(realization, t), convention))
    return states


class _BatchEvolver:
    """Steps a (n_realizations, n_nodes, k, 2) amplitude batch.

    Degenerate disorder parameters (all-zero phases, all-Hadamard coins,
    all-unit jumps) are canonicalized away so that zero-strength
    ensembles run through exactly the clean code path and reproduce the
    clean curve bit for bit.
    """

    def __init__(self, k: int, realizations: Sequence[dis.Realization], convention: str):
        kinds = {r.model.kind for r in realizations}
        if len(kinds) != 1:
            raise ValueError(f"mixed realization kinds in one batch: {sorted(kinds)}")
        self.k = k
        self.kind = kinds.pop()
        self.convention = convention
        self.hadamard = coin_matrix(HADAMARD)
        self.site_coin_mats = None
        self.time_coins = None
        self.site_phases = None
        self.time_phases = None
        self.jumps = None
        if self.kind == dis.STATIC_COIN:
            rhos = np.stack([r.site_coins for r in realizations])
            if np.any(rhos != 0.5):
                self.site_coin_mats = coin_matrices(rhos)[:, np.newaxis]  # (n, 1, k, 2, 2)
        elif self.kind == dis.DYNAMIC_COIN:
            coins = np.stack([r.time_coins for r in realizations])
            if np.any(coins != 0.5):
                self.time_coins = coins
        elif self.kind == dis.STATIC_PHASE:
            phases = np.stack([r.site_phases for r in realizations])
            if phases.any():
                self.site_phases = phases[:, np.newaxis]
        elif self.kind == dis.DYNAMIC_PHASE:
            phases = np.stack([r.time_phases for r in realizations])
            if phases.any():
                self.time_phases = phases
        elif self.kind == dis.POSITION:
            jumps = np.stack([r.jumps for r in realizations])
            if np.any(jumps != 1):
                self.jumps = jumps
        self.n = len(realizations)

    def advance(self, amps: np.ndarray, t: int) -> np.ndarray:
        """Apply step t (1-based) to the batch."""
        coin = self.hadamard
        phase0 = None
        jump = 1
        if self.site_coin_mats is not None:
            coin = self.site_coin_mats
        elif self.time_coins is not None:
            coin = coin_matrices(self.time_coins[:, t - 1])[:, np.newaxis, np.newaxis]
        elif self.site_phases is not None:
            phase0 = self.site_phases
        elif self.time_phases is not None:
            phase0 = self.time_phases[:, t - 1][:, np.newaxis, np.newaxis]
        elif self.jumps is not None:
            jump = self.jumps[:, t - 1][:, np.newaxis]
        return advance_amplitudes(amps, coin, jump, phase0, None, self.convention)


def _initial_batch(k: int, n: int, initial: InitialSpec):
    """Initial amplitudes (n, nodes, k, 2) plus Simpson weights (or None)."""
    if isinstance(initial, QuadratureSpec):
        thetas = np.linspace(0.0, np.pi, initial.nodes)
        weights = simpson_weights(initial.nodes)
        phi = initial.phi
    else:
        thetas = np.asarray([initial.theta])
        weights = None
        phi = initial.phi
    amps = np.zeros((n, len(thetas), k, 2), dtype=np.complex128)
    amps[:, :, 0, 0] = np.cos(thetas / 2.0)[np.newaxis, :]
    amps[:, :, 0, 1] = (np.exp(1j * phi) * np.sin(thetas / 2.0))[np.newaxis, :]
    return amps, weights


def _theta_average(values: np.ndarray, weights: Optional[np.ndarray]) -> np.ndarray:
    """Average (n, nodes) node values: Simpson integral / pi, or the single node.

    The integrand lies in [0, 1], so the average does too; clipping
    removes only quadrature-weight rounding of order 1e-16.
    """
    if weights is None:
        return values[:, 0]
    return np.clip(values @ weights / np.pi, 0.0, 1.0)


def _ensemble_arrays(
    k: int,
    realizations: Sequence[dis.Realization],
    t_max: int,
    initial: InitialSpec,
    convention: str,
):
    """Per-step observable samples for a batch of realizations.

    Returns (e_av, p0, wrong_parity), each of shape (t_max, n); the
    wrong-parity column holds, per realization, the worst probability
    mass on sites of parity opposite to the step's, over theta nodes.
    """
    n = len(realizations)
    evolver = _BatchEvolver(k, realizations, convention)
    amps, weights = _initial_batch(k, n, initial)
    sites = np.arange(k)
    e_av = np.empty((t_max, n))
    p0 = np.empty((t_max, n))
    wrong = np.empty((t_max, n))
    for t in range(1, t_max + 1):
        amps = evolver.advance(amps, t)
        rho = coin_density_from_amplitudes(amps)
        e_av[t - 1] = _theta_average(coin_entropy(rho), weights)
        prob = position_distribution(amps)
        p0[t - 1] = _theta_average(prob[..., 0], weights)
        wrong_mask = ((sites - t) % 2) == 1
        wrong[t - 1] = prob[..., wrong_mask].sum(axis=-1).max(axis=-1)
    return e_av, p0, wrong


def _sample_batch(
    model: dis.DisorderModel, k: int, t_max: int, n: int, master_seed: int
) -> list[dis.Realization]:
    return [
        dis.sample_realization(model, k, t_max, dis.derive_subseed(master_seed, j))
        for j in range(1, n + 1)
    ]


def _realization_payloads_equal(realizations: Sequence[dis.Realization]) -> bool:
    first = realizations[0]
    fields = ("site_phases", "time_phases", "site_coins", "time_coins", "jumps")
    for other in realizations[1:]:
        for name in fields:
            a, b = getattr(first, name), getattr(other, name)
            if (a is None) != (b is None):
                return False
            if a is not None and not np.array_equal(a, b):
                return False
    return True


def _ensemble_observables(
    k: int,
    model: dis.DisorderModel,
    realizations: Sequence[dis.Realization],
    t_max: int,
    initial: InitialSpec,
    convention: str,
):
    # Degenerate ensembles (clean, or zero-strength draws) contain n
    # copies of the same walk: evolve it once and broadcast, which also
    # makes the reported spread exactly zero.
    if len(realizations) > 1 and _realization_payloads_equal(realizations):
        e, p0, wrong = _ensemble_arrays(k, realizations[:1], t_max, initial, convention)
        n = len(realizations)
        return (np.repeat(e, n, axis=1), np.repeat(p0, n, axis=1),
                np.repeat(wrong, n, axis=1))
    return _ensemble_arrays(k, realizations, t_max, initial, convention)


def e_av(
    k: int,
    model: dis.DisorderModel,
    realization: dis.Realization,
    t: int,
    quad: QuadratureSpec = QuadratureSpec(),
    convention: str = LITERAL,
) -> float:
    """Theta-averaged entropy after t steps under one fixed realization."""
    if realization.model != model:
        raise ValueError("realization was sampled for a different model")
    e, _, _ = _ensemble_arrays(k, [realization], t, quad, convention)
    return float(e[t - 1, 0])


def ensemble_average(
    k: int,
    model: dis.DisorderModel,
    t_max: int,
    n_realizations: int,
    master_seed: int,
    quad: InitialSpec = QuadratureSpec(),
    convention: str = LITERAL,
    collect_samples: bool = False,
) -> EnsembleResult:
    """Quenched average over n_realizations independent disorder draws.

    Realization j uses seed derive_subseed(master_seed, j); the mean and
    standard error of the theta-averaged entropy and of the origin
    probability are reported per step.  Passing a SingleInitial as
    ``quad`` switches to fixed-initial-state mode, where the entropy is
    not theta-averaged (used by the coin-disorder robustness results,
    which hold only for phase-symmetric initial states).
    """
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    realizations = _sample_batch(model, k, t_max, n_realizations, master_seed)
    e, p0, _ = _ensemble_observables(k, model, realizations, t_max, quad, convention)
    return EnsembleResult(
        model=model,
        k=k,
        t_max=t_max,
        n_realizations=n_realizations,
        master_seed=master_seed,
        mean_e_av=e.mean(axis=1),
        se_e_av=_standard_error(e),
        mean_p0=p0.mean(axis=1),
        se_p0=_standard_error(p0),
        shift_convention=convention,
        initial=quad,
        e_av_samples=e.T.copy() if collect_samples else None,
        p0_samples=p0.T.copy() if collect_samples else None,
    )


def _standard_error(samples: np.ndarray) -> np.ndarray:
    n = samples.shape[1]
    if n < 2:
        return np.zeros(samples.shape[0])
    se = samples.std(axis=1, ddof=1) / np.sqrt(n)
    # A constant sample has zero spread; suppress the mean-subtraction
    # rounding residue so deterministic ensembles report se = 0 exactly.
    se[samples.max(axis=1) == samples.min(axis=1)] = 0.0
    return se


def parity_profile(
    k: int,
    model: dis.DisorderModel,
    t_max: int,
    n_realizations: int,
    master_seed: int,
    quad: InitialSpec = QuadratureSpec(),
    convention: str = LITERAL,
) -> ParityProfile:
    """Origin-probability trace plus parity diagnostics.

    The violation score is max over odd t of the mean origin
    probability; on even cycles a nonzero score certifies that the
    odd-even parity was broken (only position disorder does this).
    """
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    realizations = _sample_batch(model, k, t_max, n_realizations, master_seed)
    e, p0, wrong = _ensemble_observables(k, model, realizations, t_max, quad, convention)
    result = EnsembleResult(
        model=model,
        k=k,
        t_max=t_max,
        n_realizations=n_realizations,
        master_seed=master_seed,
        mean_e_av=e.mean(axis=1),
        se_e_av=_standard_error(e),
        mean_p0=p0.mean(axis=1),
        se_p0=_standard_error(p0),
        shift_convention=convention,
        initial=quad,
    )
    odd = result.steps % 2 == 1
    score = float(result.mean_p0[odd].max()) if odd.any() else 0.0
    return ParityProfile(result=result, violation_score=score,
                         wrong_parity_max=float(wrong.max()))


def time_cone_check(
    k: int,
    model: dis.DisorderModel,
    realization: dis.Realization,
    t_max: int,
    support_tolerance: float = SUPPORT_TOL,
    theta: float = np.pi / 2,
    phi: float = DEFAULT_PHI,
    convention: str = LITERAL,
) -> np.ndarray:
    """Support-growth check: True per step iff the new support stays
    within one hop of the previous support.

    Walks with unit hopping pass every step by construction; position
    disorder is expected to fail as soon as a jump differs from 1.
    """
    if realization.model != model:
        raise ValueError("realization was sampled for a different model")
    states = evolve_state(k, realization, t_max, InitialStateParams(theta, phi), convention)
    passed = np.empty(t_max, dtype=bool)
    support = {x for x in range(k) if position_probability(states[0], x) > support_tolerance}
    for t in range(1, t_max + 1):
        new_support = {x for x in range(k)
                       if position_probability(states[t], x) > support_tolerance}
        allowed = {(x + 1) % k for x in support} | {(x - 1) % k for x in support}
        passed[t - 1] = new_support <= allowed
        support = new_support
    return passed


def sweep_time(
    k: int,
    model: dis.DisorderModel,
    t_max: int,
    n_realizations: int,
    master_seed: int,
    quad: InitialSpec = QuadratureSpec(),
    convention: str = LITERAL,
) -> EnsembleResult:
    """Realization-averaged observables on the step grid 1..t_max."""
    return ensemble_average(k, model, t_max, n_realizations, master_seed, quad, convention)


def sweep_strength(
    k: int,
    kind: str,
    strengths: Sequence[float],
    ts: Sequence[int],
    n_realizations: int,
    master_seed: int,
    quad: InitialSpec = QuadratureSpec(),
    convention: str = LITERAL,
) -> StrengthSweep:
    """Grid of mean entropies over (strength, t).

    Each strength runs a full ensemble with the same master seed, then
    the requested steps are read off; a zero strength row of a phase or
    coin sweep therefore reproduces the clean walk exactly.
    """
    ts = tuple(int(t) for t in ts)
    if not ts or min(ts) < 1:
        raise ValueError("ts must be a non-empty list of steps >= 1")
    t_max = max(ts)
    mean = np.empty((len(strengths), len(ts)))
    se = np.empty((len(strengths), len(ts)))
    for i, strength in enumerate(strengths):
        model = dis.make_model(kind, strength)
        result = ensemble_average(k, model, t_max, n_realizations, master_seed, quad, convention)
        idx = [t - 1 for t in ts]
        mean[i] = result.mean_e_av[idx]
        se[i] = result.se_e_av[idx]
    return StrengthSweep(
        kind=kind,
        k=k,
        strengths=tuple(float(s) for s in strengths),
        ts=ts,
        mean=mean,
        se=se,
        n_realizations=n_realizations,
        master_seed=master_seed,
        shift_convention=convention,
        initial=quad,
    )
