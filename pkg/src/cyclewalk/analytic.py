"""Closed-form first-step results and the numeric verification battery.

These are the ground truths the simulator is tested against: the
amplitude recursion written directly from the update rule, the exact
two-amplitude states after one step under phase disorder, and the
first-step reduced coin matrix under coin disorder, kept verbatim in
its published diagonal form.  ``verify_all`` runs the whole battery on
fixed grids and returns a machine-readable report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import disorder as dis
from .operators import (
    HADAMARD,
    LITERAL,
    SYMMETRIC,
    CoinSpec,
    ShiftSpec,
    StepPlan,
    build_step_unitary,
    coin_matrix,
    is_unitary,
    step,
)
from .state import (
    CoinDensityMatrix,
    InitialStateParams,
    WalkerState,
    entanglement_entropy,
    initial_state,
    reduced_coin_density,
)

MESPS_TOL = 1e-12
ORACLE_TOL = 1e-12


@dataclass(frozen=True)
class ClosedFormT1:
    """Exact state after one step: two nonzero amplitudes on disjoint sites.

    ``amplitudes`` lists (site, coin, value) for the two occupied basis
    states; ``entropy`` is the coin entanglement entropy of that state.
    """

    theta: float
    phi: float
    k: int
    disorder_kind: str
    phase: float
    amplitudes: tuple
    entropy: float

    def to_state(self) -> WalkerState:
        amps = np.zeros(2 * self.k, dtype=np.complex128)
        for site, coin, value in self.amplitudes:
            amps[2 * site + coin] = value
        return WalkerState(k=self.k, t=1, amplitudes=amps)


def recursion_step(state: WalkerState, rho: float, jump: int = 1) -> WalkerState:
    """One step by the amplitude recursion, written independently of the
    operator machinery.

    a0((x - J) mod k, t+1) = sqrt(rho) a0(x, t) + sqrt(1-rho) a1(x, t)
    a1((x + J) mod k, t+1) = sqrt(1-rho) a0(x, t) - sqrt(rho) a1(x, t)

    The offsets are the symmetric ones, so this matches ``step`` under
    the symmetric convention for any J and under both conventions at
    J = 1.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"coin parameter rho must lie in [0, 1], got {rho}")
    if jump < 0:
        raise ValueError(f"jump must be non-negative, got {jump}")
    k = state.k
    r = np.sqrt(rho)
    q = np.sqrt(1.0 - rho)
    grid = state.grid
    out = np.zeros((k, 2), dtype=np.complex128)
    for x in range(k):
        out[(x - jump) % k, 0] += r * grid[x, 0] + q * grid[x, 1]
        out[(x + jump) % k, 1] += q * grid[x, 0] - r * grid[x, 1]
    return WalkerState(k=k, t=state.t + 1, amplitudes=out.reshape(-1))


def mesps_t1_phase(
    theta: float, k: int, phase: float, disorder_kind: str = dis.STATIC_PHASE
) -> ClosedFormT1:
    """Exact first-step state of the Hadamard walk with one phase angle.

    For the initial state with phi = pi/2, the step leaves exactly two
    amplitudes, (cos(t/2)+i sin(t/2)) e^{i phase}/sqrt(2) on site k-1
    coin 0 and (cos(t/2)-i sin(t/2))/sqrt(2) on site 1 coin 1.  Both
    have squared modulus 1/2 on disjoint sites, so the coin state is
    maximally mixed and the entropy is 1 for every theta, every phase
    value and every k: the maximal entanglement at the first step is
    untouched by phase disorder, static or dynamic.
    """
    if disorder_kind not in dis.PHASE_KINDS:
        raise ValueError(f"disorder_kind must be one of {dis.PHASE_KINDS}")
    if k < 3:
        raise ValueError(f"cycle size k must be >= 3, got {k}")
    half = theta / 2.0
    left = (np.cos(half) + 1j * np.sin(half)) / np.sqrt(2.0) * np.exp(1j * phase)
    right = (np.cos(half) - 1j * np.sin(half)) / np.sqrt(2.0)
    pairs = ((k - 1, 0, complex(left)), (1, 1, complex(right)))
    amps = np.zeros(2 * k, dtype=np.complex128)
    for site, coin, value in pairs:
        amps[2 * site + coin] = value
    state = WalkerState(k=k, t=1, amplitudes=amps)
    entropy = entanglement_entropy(reduced_coin_density(state))
    if abs(entropy - 1.0) > MESPS_TOL:
        raise AssertionError(
            f"first-step state failed maximal-entropy check: E = {entropy!r}")
    return ClosedFormT1(
        theta=theta,
        phi=np.pi / 2,
        k=k,
        disorder_kind=disorder_kind,
        phase=phase,
        amplitudes=pairs,
        entropy=entropy,
    )


def coin_t1_reduced_density(theta: float, phi: float, rho0: float) -> CoinDensityMatrix:
    """First-step reduced coin matrix under coin disorder, verbatim form.

    diag(sin^2(t/2) + sqrt(rho0) cos(t), cos^2(t/2) - sqrt(rho0) cos(t))

    Valid for phi in {pi/2, 3*pi/2}.  At theta = pi/2 this is the
    maximally mixed state for every rho0, which is the robustness
    claim; away from theta = pi/2 the printed expression deviates from
    the simulated matrix (see the verification battery, which reports
    both rather than papering over the difference).
    """
    if not 0.0 <= rho0 <= 1.0:
        raise ValueError(f"rho0 must lie in [0, 1], got {rho0}")
    if not (abs(phi - np.pi / 2) < 1e-12 or abs(phi - 3 * np.pi / 2) < 1e-12):
        raise ValueError("the diagonal form holds for phi in {pi/2, 3*pi/2}")
    half = theta / 2.0
    shift = np.sqrt(rho0) * np.cos(theta)
    return CoinDensityMatrix(np.diag([np.sin(half) ** 2 + shift,
                                      np.cos(half) ** 2 - shift]).astype(np.complex128))


def coin_t1_simulated_density(
    theta: float, phi: float, rho0: float, k: int = 4
) -> CoinDensityMatrix:
    """First-step reduced coin matrix from an actual one-step simulation
    with coin parameter rho0 at the origin (Hadamard elsewhere)."""
    coins = tuple(CoinSpec(rho0 if x == 0 else 0.5) for x in range(k))
    state = step(initial_state(k, InitialStateParams(theta, phi)),
                 StepPlan(coins=coins, shift=ShiftSpec(jump=1)))
    return reduced_coin_density(state)


# ---------------------------------------------------------------------------
# Verification battery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    inputs: dict
    expected: str
    got: str
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(
            {
                "ok": self.ok,
                "checks": [
                    {
                        "name": c.name,
                        "inputs": c.inputs,
                        "expected": c.expected,
                        "got": c.got,
                        "pass": c.passed,
                    }
                    for c in self.checks
                ],
            },
            indent=indent,
        )


def _random_plan(rng: np.random.Generator, k: int) -> tuple[StepPlan, str]:
    kind = rng.choice(["clean", "site-coin", "step-coin", "site-phase", "step-phase", "jump"])
    coins: object = HADAMARD
    shift = ShiftSpec(jump=1)
    if kind == "site-coin":
        coins = tuple(CoinSpec(float(r)) for r in rng.uniform(0.0, 1.0, size=k))
    elif kind == "step-coin":
        coins = CoinSpec(float(rng.uniform(0.0, 1.0)))
    elif kind == "site-phase":
        shift = ShiftSpec(jump=1, phase0=rng.uniform(0.0, np.pi, size=k))
    elif kind == "step-phase":
        shift = ShiftSpec(jump=1, phase0=float(rng.uniform(0.0, np.pi)))
    elif kind == "jump":
        shift = ShiftSpec(jump=int(rng.integers(0, 2 * k + 1)))
    return StepPlan(coins=coins, shift=shift), str(kind)


def _random_state(rng: np.random.Generator, k: int) -> WalkerState:
    raw = rng.normal(size=2 * k) + 1j * rng.normal(size=2 * k)
    return WalkerState(k=k, t=0, amplitudes=raw / np.linalg.norm(raw))


def verify_all(seed: int = 20240901, sink=None) -> VerificationReport:
    """Run the analytic and oracle-equivalence battery on fixed grids.

    Every entry records inputs, the expected property and the observed
    numbers; failures become report entries rather than exceptions.  If
    ``sink`` is given, the JSON report is written to it.
    """
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []

    # Clean 4-cycle recurrence spot values at the extreme steps.
    from .ensemble import QuadratureSpec, e_av  # local import to avoid a cycle

    clean = dis.DisorderModel.clean()
    realization = dis.sample_realization(clean, 4, 13, seed)
    quad = QuadratureSpec()
    worst = 0.0
    for t, target in ((1, 1.0), (4, 0.0), (5, 1.0), (8, 0.0), (12, 0.0), (13, 1.0)):
        worst = max(worst, abs(e_av(4, clean, realization, t, quad) - target))
    checks.append(CheckResult(
        name="clean-recurrence-4cycle",
        inputs={"k": 4, "steps": [1, 4, 5, 8, 12, 13]},
        expected="E_av hits 1 at t=1,5,13 and 0 at t=4,8,12 within 1e-8",
        got=f"max deviation {worst:.3e}",
        passed=bool(worst < 1e-8),
    ))

    # Phase disorder leaves the first step maximally entangled: closed form
    # on a 50x50 (theta, phase) grid, both static and dynamic.
    for kind in dis.PHASE_KINDS:
        worst = 0.0
        for theta in np.linspace(0.0, np.pi, 50):
            for phase in np.linspace(0.0, np.pi, 50):
                closed = mesps_t1_phase(theta, 4, phase, kind)
                worst = max(worst, abs(closed.entropy - 1.0))
        checks.append(CheckResult(
            name=f"phase-t1-mesps-{kind}",
            inputs={"k": 4, "grid": "50x50 theta x phase"},
            expected="entropy 1 within 1e-12 at every grid point",
            got=f"max |E-1| = {worst:.3e}",
            passed=bool(worst < MESPS_TOL),
        ))

    # Closed form against a full first-step simulation of sampled phase
    # realizations.
    worst = 0.0
    for kind in dis.PHASE_KINDS:
        model = dis.make_model(kind, 1.0)
        for trial in range(5):
            sub = dis.derive_subseed(seed, 100 + trial)
            real = dis.sample_realization(model, 5, 3, sub)
            theta = float(rng.uniform(0.0, np.pi))
            phase = float(real.site_phases[0] if kind == dis.STATIC_PHASE
                          else real.time_phases[0])
            closed = mesps_t1_phase(theta, 5, phase, kind).to_state()
            plan_phase = real.site_phases if kind == dis.STATIC_PHASE else phase
            simulated = step(initial_state(5, InitialStateParams(theta, np.pi / 2)),
                             StepPlan(coins=HADAMARD, shift=ShiftSpec(1, phase0=plan_phase)))
            worst = max(worst, float(np.max(np.abs(closed.amplitudes - simulated.amplitudes))))
    checks.append(CheckResult(
        name="phase-t1-closed-form-vs-simulation",
        inputs={"k": 5, "trials": 10},
        expected="amplitudes agree within 1e-12",
        got=f"max deviation {worst:.3e}",
        passed=bool(worst < ORACLE_TOL),
    ))

    # Coin disorder at the first step: maximally entangled on the
    # phase-symmetric line, and only there.
    worst = 0.0
    for phi in (np.pi / 2, 3 * np.pi / 2):
        for rho0 in rng.uniform(0.0, 1.0, size=50):
            printed = coin_t1_reduced_density(np.pi / 2, phi, float(rho0))
            simulated = coin_t1_simulated_density(np.pi / 2, phi, float(rho0))
            worst = max(
                worst,
                abs(entanglement_entropy(printed) - 1.0),
                abs(entanglement_entropy(simulated) - 1.0),
                float(np.max(np.abs(printed.entries - simulated.entries))),
            )
    checks.append(CheckResult(
        name="coin-t1-mesps-phase-symmetric-line",
        inputs={"theta": "pi/2", "phi": ["pi/2", "3*pi/2"], "rho0": "100 uniform draws"},
        expected="printed and simulated coin matrices both maximally mixed, E = 1 within 1e-12",
        got=f"max deviation {worst:.3e}",
        passed=bool(worst < MESPS_TOL),
    ))

    off_line = 0.0
    on_line = 0.0
    for theta in np.linspace(0.0, np.pi, 9):
        printed = coin_t1_reduced_density(theta, np.pi / 2, 0.7)
        simulated = coin_t1_simulated_density(theta, np.pi / 2, 0.7)
        gap = float(np.max(np.abs(printed.entries - simulated.entries)))
        if abs(theta - np.pi / 2) < 1e-9:
            on_line = max(on_line, gap)
        else:
            off_line = max(off_line, gap)
    checks.append(CheckResult(
        name="coin-t1-printed-form-discrepancy",
        inputs={"rho0": 0.7, "theta": "9 nodes on [0, pi]"},
        expected="printed diagonal form matches simulation at theta=pi/2 only; "
                 "the off-line discrepancy is real and is reported here",
        got=f"on-line gap {on_line:.3e}, max off-line gap {off_line:.3e}",
        passed=bool(on_line < MESPS_TOL and off_line > 1e-6),
    ))

    # Negative control for the coin robustness: off the symmetric line the
    # first step is not maximally entangled.
    entropy = entanglement_entropy(coin_t1_simulated_density(np.pi / 4, np.pi / 2, 0.9))
    checks.append(CheckResult(
        name="coin-t1-off-line-not-maximal",
        inputs={"theta": "pi/4", "phi": "pi/2", "rho0": 0.9},
        expected="entropy below 1 - 1e-3",
        got=f"E = {entropy:.6f}",
        passed=bool(entropy < 1.0 - 1e-3),
    ))

    # Recursion against the operator path, symmetric convention, J = 1.
    worst = 0.0
    for k in (3, 4, 5, 8):
        state = initial_state(k, InitialStateParams(float(rng.uniform(0, np.pi))))
        other = state
        for _ in range(15):
            rho = float(rng.uniform(0.0, 1.0))
            state = recursion_step(state, rho, 1)
            other = step(other, StepPlan(coins=CoinSpec(rho), shift=ShiftSpec(1)), SYMMETRIC)
            worst = max(worst, float(np.max(np.abs(state.amplitudes - other.amplitudes))))
    checks.append(CheckResult(
        name="recursion-vs-operator",
        inputs={"k": [3, 4, 5, 8], "steps": 15, "convention": SYMMETRIC},
        expected="amplitudes agree within 1e-12",
        got=f"max deviation {worst:.3e}",
        passed=bool(worst < ORACLE_TOL),
    ))

    # Single steps against the dense unitary, both conventions.
    worst = 0.0
    unitarity_ok = True
    for k in (3, 4, 5, 8):
        for _ in range(25):
            plan, _kind = _random_plan(rng, k)
            state = _random_state(rng, k)
            for convention in (LITERAL, SYMMETRIC):
                matrix = build_step_unitary(k, plan, convention)
                unitarity_ok = unitarity_ok and is_unitary(matrix)
                direct = step(state, plan, convention)
                via_matrix = matrix @ state.amplitudes
                worst = max(worst, float(np.max(np.abs(direct.amplitudes - via_matrix))))
    checks.append(CheckResult(
        name="step-vs-unitary",
        inputs={"k": [3, 4, 5, 8], "plans": "25 random per k", "conventions": list((LITERAL, SYMMETRIC))},
        expected="step equals matrix action within 1e-12; matrices unitary",
        got=f"max deviation {worst:.3e}, unitary: {unitarity_ok}",
        passed=bool(worst < ORACLE_TOL and unitarity_ok),
    ))

    # Coin family unitarity across the parameter range.
    coin_ok = all(is_unitary(coin_matrix(CoinSpec(float(r))))
                  for r in np.linspace(0.0, 1.0, 21))
    checks.append(CheckResult(
        name="coin-matrix-unitarity",
        inputs={"rho": "21 nodes on [0, 1]"},
        expected="C(rho) unitary within 1e-12",
        got=str(coin_ok),
        passed=bool(coin_ok),
    ))

    report = VerificationReport(checks=tuple(checks))
    if sink is not None:
        sink.write(report.to_json())
    return report
