"""Coin and shift operators of the cyclic walk, and the one-step evolution.

One step applies a (possibly site-dependent) 2x2 coin at every site and
then a conditional translation.  The translation moves the coin-0
amplitude at site x to (x - J) mod k.  Two conventions exist for the
coin-1 branch:

* ``"literal"``   : coin-1 goes to (x + 2 - J) mod k, the printed form
  of the shift operator with offset x + 2s - J.
* ``"symmetric"`` : coin-1 goes to (x + J) mod k, the form used by the
  amplitude recursion and by position-disorder ensembles.

Both agree at the default hopping length J = 1.  Phase decoration
multiplies the coin-0 amplitude leaving site x by exp(i*phase0(x)); the
coin-1 phase is fixed to 0 by gauge convention (only the relative phase
is observable) but is representable for equivalence tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .state import WalkerState

LITERAL = "literal"
SYMMETRIC = "symmetric"
CONVENTIONS = (LITERAL, SYMMETRIC)

UNITARITY_TOL = 1e-12

PhaseLike = Union[None, float, np.ndarray]


def _check_convention(convention: str) -> str:
    if convention not in CONVENTIONS:
        raise ValueError(f"shift convention must be one of {CONVENTIONS}, got {convention!r}")
    return convention


@dataclass(frozen=True)
class CoinSpec:
    """One-parameter coin family C(rho), real symmetric and unitary."""

    rho: float

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"coin parameter rho must lie in [0, 1], got {self.rho}")


HADAMARD = CoinSpec(rho=0.5)


@dataclass(frozen=True)
class ShiftSpec:
    """Translation parameters for one step.

    ``jump`` is the non-negative hopping length J.  ``phase0`` decorates
    the coin-0 branch: either a length-k array of per-site angles
    (site-dependent phases), a single scalar angle (one per-step phase,
    site-independent), or None for no phase.  ``phase1`` follows the
    same typing and defaults to the zero gauge.
    """

    jump: int = 1
    phase0: PhaseLike = None
    phase1: PhaseLike = None

    def __post_init__(self):
        if int(self.jump) != self.jump or self.jump < 0:
            raise ValueError(f"jump must be a non-negative integer, got {self.jump}")
        object.__setattr__(self, "jump", int(self.jump))
        for name in ("phase0", "phase1"):
            value = getattr(self, name)
            if value is None:
                continue
            arr = np.asarray(value, dtype=float)
            if arr.ndim > 1:
                raise ValueError(f"{name} must be a scalar or 1-d array")
            object.__setattr__(self, name, arr if arr.ndim else float(arr))


@dataclass(frozen=True)
class StepPlan:
    """Full specification of one step: coin(s) plus shift.

    ``coins`` is a single CoinSpec applied at every site, or a length-k
    sequence with one CoinSpec per site.
    """

    coins: Union[CoinSpec, Sequence[CoinSpec]]
    shift: ShiftSpec = ShiftSpec()


def clean_plan(jump: int = 1) -> StepPlan:
    """Hadamard coin, no phases; J=1 gives the clean cyclic walk."""
    return StepPlan(coins=HADAMARD, shift=ShiftSpec(jump=jump))


def coin_matrix(c: CoinSpec) -> np.ndarray:
    """The 2x2 coin [[sqrt(rho), sqrt(1-rho)], [sqrt(1-rho), -sqrt(rho)]]."""
    return coin_matrices(c.rho)


def coin_matrices(rho) -> np.ndarray:
    """Coin matrices for scalar or batched rho: shape rho.shape + (2, 2)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0) or np.any(rho > 1.0):
        raise ValueError("coin parameter rho must lie in [0, 1]")
    r = np.sqrt(rho)
    q = np.sqrt(1.0 - rho)
    out = np.empty(rho.shape + (2, 2))
    out[..., 0, 0] = r
    out[..., 0, 1] = q
    out[..., 1, 0] = q
    out[..., 1, 1] = -r
    return out


def _plan_coin_array(plan: StepPlan, k: int) -> np.ndarray:
    if isinstance(plan.coins, CoinSpec):
        return coin_matrix(plan.coins)
    rhos = [c.rho for c in plan.coins]
    if len(rhos) != k:
        raise ValueError(f"site-indexed coin list has length {len(rhos)}, expected k={k}")
    return coin_matrices(np.asarray(rhos))


def _check_site_phase(phase: PhaseLike, k: int, name: str) -> PhaseLike:
    if isinstance(phase, np.ndarray) and phase.shape != (k,):
        raise ValueError(f"{name} array has length {phase.shape[0]}, expected k={k}")
    return phase


def advance_amplitudes(
    amps: np.ndarray,
    coin: np.ndarray,
    jump,
    phase0: PhaseLike = None,
    phase1: PhaseLike = None,
    convention: str = LITERAL,
) -> np.ndarray:
    """Apply coin then shift to batched amplitudes of shape (..., k, 2).

    ``coin`` must broadcast against (..., k, 2, 2); ``jump`` is a scalar
    or an integer array broadcasting over the batch dimensions; phases
    broadcast against (..., k) and act on the amplitude leaving each
    source site.  This single kernel backs both the scalar ``step`` and
    the disorder-ensemble evolution.
    """
    _check_convention(convention)
    k = amps.shape[-2]
    mixed = np.matmul(coin, amps[..., np.newaxis])[..., 0]
    a0 = mixed[..., 0]
    a1 = mixed[..., 1]
    if phase0 is not None:
        a0 = a0 * np.exp(1j * np.asarray(phase0))
    if phase1 is not None:
        a1 = a1 * np.exp(1j * np.asarray(phase1))
    sites = np.arange(k)
    jump_arr = np.asarray(jump, dtype=int)[..., np.newaxis]
    # Destination y receives the source amplitude that maps onto it.
    idx0 = (sites + jump_arr) % k
    if convention == LITERAL:
        idx1 = (sites + jump_arr - 2) % k
    else:
        idx1 = (sites - jump_arr) % k
    a0 = _gather_last(a0, idx0)
    a1 = _gather_last(a1, idx1)
    return np.stack([a0, a1], axis=-1)


def _gather_last(arr: np.ndarray, idx: np.ndarray) -> np.ndarray:
    if idx.ndim == 1:
        return arr[..., idx]
    idx = idx.reshape((idx.shape[0],) + (1,) * (arr.ndim - 2) + (idx.shape[-1],))
    return np.take_along_axis(arr, np.broadcast_to(idx, arr.shape[:-1] + (idx.shape[-1],)), axis=-1)


def apply_coin(state: WalkerState, plan: StepPlan) -> WalkerState:
    """Mix the coin components at every site; position untouched, t unchanged."""
    coin = _plan_coin_array(plan, state.k)
    mixed = np.matmul(coin, state.grid[..., np.newaxis])[..., 0]
    return WalkerState(k=state.k, t=state.t, amplitudes=mixed.reshape(-1))


def apply_shift(state: WalkerState, shift: ShiftSpec, convention: str = LITERAL) -> WalkerState:
    """Translate amplitudes around the cycle, applying phase decoration."""
    _check_convention(convention)
    k = state.k
    phase0 = _check_site_phase(shift.phase0, k, "phase0")
    phase1 = _check_site_phase(shift.phase1, k, "phase1")
    identity = np.eye(2)
    moved = advance_amplitudes(state.grid, identity, shift.jump, phase0, phase1, convention)
    return WalkerState(k=k, t=state.t, amplitudes=moved.reshape(-1))


def step(state: WalkerState, plan: StepPlan, convention: str = LITERAL) -> WalkerState:
    """One full evolution step: shift(coin(state)) with t incremented."""
    _check_convention(convention)
    k = state.k
    coin = _plan_coin_array(plan, k)
    phase0 = _check_site_phase(plan.shift.phase0, k, "phase0")
    phase1 = _check_site_phase(plan.shift.phase1, k, "phase1")
    moved = advance_amplitudes(state.grid, coin, plan.shift.jump, phase0, phase1, convention)
    return WalkerState(k=k, t=state.t + 1, amplitudes=moved.reshape(-1))


def build_step_unitary(k: int, plan: StepPlan, convention: str = LITERAL) -> np.ndarray:
    """Dense 2k x 2k matrix of one step, assembled from the operator definition.

    Built as S @ C with C block-diagonal over sites and S placed entry
    by entry from the target-site formula, independently of the index
    gymnastics in ``advance_amplitudes``; serves as the oracle in
    equivalence tests.
    """
    _check_convention(convention)
    if k < 3:
        raise ValueError(f"cycle size k must be >= 3, got {k}")
    coin = _plan_coin_array(plan, k)
    phase0 = _check_site_phase(plan.shift.phase0, k, "phase0")
    phase1 = _check_site_phase(plan.shift.phase1, k, "phase1")
    jump = plan.shift.jump

    C = np.zeros((2 * k, 2 * k), dtype=np.complex128)
    for x in range(k):
        C[2 * x : 2 * x + 2, 2 * x : 2 * x + 2] = coin if coin.ndim == 2 else coin[x]

    S = np.zeros((2 * k, 2 * k), dtype=np.complex128)
    for x in range(k):
        for s in (0, 1):
            if convention == LITERAL:
                target = (x + 2 * s - jump) % k
            else:
                target = (x - jump) % k if s == 0 else (x + jump) % k
            phase = phase0 if s == 0 else phase1
            if phase is None:
                angle = 0.0
            elif isinstance(phase, np.ndarray):
                angle = phase[x]
            else:
                angle = phase
            S[2 * target + s, 2 * x + s] = np.exp(1j * angle)
    return S @ C


def is_unitary(matrix: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    """Whether M'M = I within tol; used by the verification battery."""
    m = np.asarray(matrix)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)
