"""Desk-scale density-matrix simulation of collapse heating (hbar = m = 1)."""

from ._backend import BACKENDS, DEFAULT_BACKEND, get_backend
from .core import (
    DensityMatrixState,
    GaussianState,
    HeatingRate,
    OscillatorState,
    Potential,
    SimConfig,
    SimSeries,
    SimulationError,
    SuperpositionState,
    analytic_heating_rate,
    decoherence_rates,
    decoherence_superoperator,
    energy_scale_si,
    evolve,
    hamiltonian_matrix,
    max_stable_dt,
    measure_heating_rate,
    per_dimension_to_3d,
)
from .verify import IndependenceReport, run_independence_check, standard_cases
