"""Quantum walk on a line: measurement protocol and entanglement thermodynamics."""

from .asymptotics import (
    REACHABLE_RADIUS,
    AnalyticFormUnavailable,
    AsymptoticEstimate,
    ChiralityDensity,
    InterferenceTerm,
    InvalidDensity,
    analytic_Q0,
    estimate_asymptotics,
    rho1c,
    stationary_chirality,
)
from .measurement import (
    MINUS,
    PLUS,
    BranchAsymptotics,
    MixedEnsemble,
    branch_asymptotics,
    branch_density,
    collapse,
    rho2c_analytic,
    rho2c_bruteforce,
)
from .sweep import Axis, ProtocolParams, RunRecord, SweepGrid, figure1, figure2, run_protocol, run_sweep
from .thermo import (
    BoundsReport,
    EnergyScale,
    ThermoReport,
    density_eigenvalues,
    entropy,
    mixture_upper_bound,
    process_report,
    thermo_state,
)
from .walker import (
    BlochAngles,
    Coin,
    SpinorField,
    chirality_probabilities,
    evolve,
    init_localized,
    interference_term,
    position_distribution,
    step,
)

__version__ = "0.1.0"
