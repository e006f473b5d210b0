"""Discrete-time quantum walks on k-site cycles under phase, coin and
position disorder, with quenched averaging of the walker's
coin-position entanglement."""

from .state import (
    CoinDensityMatrix,
    InitialStateParams,
    WalkerState,
    entanglement_entropy,
    initial_state,
    position_probability,
    reduced_coin_density,
)
from .operators import (
    CONVENTIONS,
    HADAMARD,
    LITERAL,
    SYMMETRIC,
    CoinSpec,
    ShiftSpec,
    StepPlan,
    advance_amplitudes,
    apply_coin,
    apply_shift,
    build_step_unitary,
    clean_plan,
    coin_matrix,
    is_unitary,
    step,
)
from .disorder import (
    DisorderModel,
    Realization,
    derive_subseed,
    make_model,
    poisson_sample,
    sample_realization,
)
from .ensemble import (
    EnsembleResult,
    ParityProfile,
    QuadratureSpec,
    SingleInitial,
    StrengthSweep,
    e_av,
    ensemble_average,
    evolve_state,
    parity_profile,
    realization_plan,
    simpson_weights,
    sweep_strength,
    sweep_time,
    time_cone_check,
)
from .analytic import (
    ClosedFormT1,
    VerificationReport,
    coin_t1_reduced_density,
    coin_t1_simulated_density,
    mesps_t1_phase,
    recursion_step,
    verify_all,
)

__version__ = "0.1.0"

__all__ = [
    "CoinDensityMatrix",
    "InitialStateParams",
    "WalkerState",
    "entanglement_entropy",
    "initial_state",
    "position_probability",
    "reduced_coin_density",
    "CONVENTIONS",
    "HADAMARD",
    "LITERAL",
    "SYMMETRIC",
    "CoinSpec",
    "ShiftSpec",
    "StepPlan",
    "advance_amplitudes",
    "apply_coin",
    "apply_shift",
    "build_step_unitary",
    "clean_plan",
    "coin_matrix",
    "is_unitary",
    "step",
    "DisorderModel",
    "Realization",
    "derive_subseed",
    "make_model",
    "poisson_sample",
    "sample_realization",
    "EnsembleResult",
    "ParityProfile",
    "QuadratureSpec",
    "SingleInitial",
    "StrengthSweep",
    "e_av",
    "ensemble_average",
    "evolve_state",
    "parity_profile",
    "realization_plan",
    "simpson_weights",
    "sweep_strength",
    "sweep_time",
    "time_cone_check",
    "ClosedFormT1",
    "VerificationReport",
    "coin_t1_reduced_density",
    "coin_t1_simulated_density",
    "mesps_t1_phase",
    "recursion_step",
    "verify_all",
    "__version__",
]
