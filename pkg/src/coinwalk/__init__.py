"""Discrete-time quantum walks with fully programmable coins.

Simulation of one-dimensional walks with time- and position-dependent
coin operations, inverse synthesis of coin programs from target position
distributions, purity and randomness analysis, and compilation of coin
programs into the timed electro-optic pulse schedules of a fiber-loop
implementation.
"""

from .state import (
    CoinOp,
    CoinProgram,
    DistributionSchedule,
    GeneralCoinOp,
    WalkerState,
    localized_state,
    norm,
    position_distribution,
)
from .synth import (
    AmplitudePlan,
    disentangle_layer,
    gaussian_program,
    plan_amplitudes,
    synthesize_coins,
    uniform_program,
)
from .walk import (
    StepReport,
    apply_coin_layer,
    apply_shift,
    circular_initial,
    hadamard_program,
    mirror_program,
    run_program,
    step,
)

__all__ = [
    "AmplitudePlan",
    "CoinOp",
    "CoinProgram",
    "DistributionSchedule",
    "GeneralCoinOp",
    "StepReport",
    "WalkerState",
    "apply_coin_layer",
    "apply_shift",
    "circular_initial",
    "disentangle_layer",
    "gaussian_program",
    "hadamard_program",
    "localized_state",
    "mirror_program",
    "norm",
    "plan_amplitudes",
    "position_distribution",
    "run_program",
    "step",
    "synthesize_coins",
    "uniform_program",
]

__version__ = "0.1.0"
