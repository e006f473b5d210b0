"""Walker states on a k-site cycle and coin-subsystem observables.

A walker state lives on the product of a k-dimensional position space
(sites 0..k-1 of the cycle) and a 2-dimensional coin space.  Amplitudes
are stored as one dense complex vector of length 2k with the fixed
layout ``flat index = 2*x + s`` for site x and coin s, so that
``amplitudes.reshape(k, 2)[x, s]`` is the amplitude on |x, s>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-10
HERMITICITY_TOL = 1e-12
EIGENVALUE_CLAMP = 1e-12

_LOG2_HALF_WINDOW = 1e-300  # guard for log2 underflow, not a tolerance


@dataclass(frozen=True)
class InitialStateParams:
    """Bloch-sphere angles of the initial coin superposition.

    theta in [0, pi] sets the coin-0/coin-1 weights cos(theta/2) and
    sin(theta/2); phi in [0, 2*pi) is the relative phase of coin 1.
    """

    theta: float
    phi: float = np.pi / 2

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")


@dataclass(frozen=True)
class WalkerState:
    """Pure state of the walker after t steps on a k-cycle.

    Fields
    ------
    k : number of cycle sites, at least 3.
    t : number of steps applied so far.
    amplitudes : complex vector of length 2k, flat index 2*x + s.

    The vector must be normalized to 1 within ``NORM_TOL``.  Instances
    are immutable; the amplitude buffer is marked read-only.
    """

    k: int
    t: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.k < 3:
            raise ValueError(f"cycle size k must be >= 3, got {self.k}")
        if self.t < 0:
            raise ValueError(f"time step must be non-negative, got {self.t}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 * self.k,):
            raise ValueError(
                f"amplitudes must have shape ({2 * self.k},), got {amps.shape}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm^2 deviates from 1 by {abs(norm - 1.0):.3e}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def grid(self) -> np.ndarray:
        """Amplitudes reshaped to (k, 2); grid[x, s] is the flat entry 2x+s."""
        return self.amplitudes.reshape(self.k, 2)

    def amplitude(self, x: int, s: int) -> complex:
        """Amplitude on basis state |x, s>."""
        if not 0 <= x < self.k:
            raise ValueError(f"site index {x} outside 0..{self.k - 1}")
        if s not in (0, 1):
            raise ValueError(f"coin index must be 0 or 1, got {s}")
        return complex(self.amplitudes[2 * x + s])


@dataclass(frozen=True)
class CoinDensityMatrix:
    """2x2 reduced density matrix of the coin subsystem.

    Validated to be Hermitian and trace-1 within ``HERMITICITY_TOL`` and
    positive semidefinite up to ``-EIGENVALUE_CLAMP``.
    """

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=np.complex128)
        if rho.shape != (2, 2):
            raise ValueError(f"coin density matrix must be 2x2, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
            raise ValueError("coin density matrix is not Hermitian within tolerance")
        if abs(rho[0, 0].real + rho[1, 1].real - 1.0) > HERMITICITY_TOL:
            raise ValueError("coin density matrix trace deviates from 1")
        lo = min(_eigenvalues_2x2(rho))
        if lo < -EIGENVALUE_CLAMP:
            raise ValueError(f"coin density matrix has eigenvalue {lo:.3e} < 0")
        rho = rho.copy()
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)

    def eigenvalues(self) -> tuple[float, float]:
        """Eigenvalues (descending), clamped to [0, 1]."""
        hi, lo = _eigenvalues_2x2(self.entries)
        return (float(np.clip(hi, 0.0, 1.0)), float(np.clip(lo, 0.0, 1.0)))


def _eigenvalues_2x2(rho: np.ndarray) -> tuple[float, float]:
    # Closed form for Hermitian [[a, b], [b*, d]]: (a+d)/2 +- sqrt(((a-d)/2)^2 + |b|^2)
    a = rho[0, 0].real
    d = rho[1, 1].real
    half_sum = 0.5 * (a + d)
    disc = np.sqrt((0.5 * (a - d)) ** 2 + abs(rho[0, 1]) ** 2)
    return half_sum + disc, half_sum - disc


def initial_state(k: int, params: InitialStateParams) -> WalkerState:
    """Walker localized at site 0 with coin cos(t/2)|0> + e^{i phi} sin(t/2)|1>."""
    if k < 3:
        raise ValueError(f"cycle size k must be >= 3, got {k}")
    amps = np.zeros(2 * k, dtype=np.complex128)
    amps[0] = np.cos(params.theta / 2.0)
    amps[1] = np.exp(1j * params.phi) * np.sin(params.theta / 2.0)
    return WalkerState(k=k, t=0, amplitudes=amps)


def reduced_coin_density(state: WalkerState) -> CoinDensityMatrix:
    """Trace out the position register: rho[s, s'] = sum_x a_s(x) conj(a_s'(x))."""
    return CoinDensityMatrix(coin_density_from_amplitudes(state.grid))


def coin_density_from_amplitudes(amps: np.ndarray) -> np.ndarray:
    """Batched partial trace over position.

    ``amps`` has shape (..., k, 2); returns (..., 2, 2) raw matrices.
    Used by the ensemble engine where constructing CoinDensityMatrix
    objects per realization would be wasteful.
    """
    return np.einsum("...xs,...xt->...st", amps, amps.conj())


def entanglement_entropy(rho: CoinDensityMatrix) -> float:
    """Von Neumann entropy of the coin state in bits.

    Eigenvalues come from the closed 2x2 Hermitian formula and are
    clamped to [0, 1] before the logs; 0*log2(0) is taken as 0.  The
    result lies in [0, 1] and equals 1 only for the maximally mixed
    coin state.
    """
    return float(coin_entropy(rho.entries[None, ...])[0])


def coin_entropy(rho_batch: np.ndarray) -> np.ndarray:
    """Entropy of a batch of raw 2x2 coin matrices, shape (..., 2, 2) -> (...)."""
    a = rho_batch[..., 0, 0].real
    d = rho_batch[..., 1, 1].real
    half_sum = 0.5 * (a + d)
    disc = np.sqrt((0.5 * (a - d)) ** 2 + np.abs(rho_batch[..., 0, 1]) ** 2)
    mu_hi = np.clip(half_sum + disc, 0.0, 1.0)
    mu_lo = np.clip(half_sum - disc, 0.0, 1.0)
    out = np.zeros_like(mu_hi)
    for mu in (mu_hi, mu_lo):
        mask = mu > _LOG2_HALF_WINDOW
        out = out - np.where(mask, mu * np.log2(np.where(mask, mu, 1.0)), 0.0)
    return out


def position_probability(state: WalkerState, x: int) -> float:
    """Probability of finding the walker at site x: |a_0(x)|^2 + |a_1(x)|^2."""
    if not 0 <= x < state.k:
        raise ValueError(f"site index {x} outside 0..{state.k - 1}")
    g = state.grid
    return float(np.abs(g[x, 0]) ** 2 + np.abs(g[x, 1]) ** 2)


def position_distribution(amps: np.ndarray) -> np.ndarray:
    """Site occupation probabilities for batched amplitudes (..., k, 2) -> (..., k)."""
    return np.sum(np.abs(amps) ** 2, axis=-1)
