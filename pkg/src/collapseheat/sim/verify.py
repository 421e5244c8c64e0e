"""State- and potential-independence check of the simulated heating rate."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import (
    GaussianState,
    OscillatorState,
    Potential,
    SimConfig,
    SimSeries,
    SuperpositionState,
    analytic_heating_rate,
    evolve,
    measure_heating_rate,
)

__all__ = ["CaseResult", "IndependenceReport", "standard_cases", "run_independence_check"]


@dataclass(frozen=True)
class CaseResult:
    label: str
    rate: float
    stderr: float
    r_squared: float
    relative_error: float
    series: SimSeries


@dataclass(frozen=True)
class IndependenceReport:
    analytic_rate: float
    cases: tuple
    tolerance: float
    pairwise_tolerance: float

    @property
    def max_pairwise_spread(self) -> float:
        return max((abs(a.rate - b.rate) / abs(b.rate) for a, b in combinations(self.cases, 2)), default=0.0)

    @property
    def passed(self) -> bool:
        return (all(c.relative_error <= self.tolerance for c in self.cases)
                and self.max_pairwise_spread <= self.pairwise_tolerance)

    def to_dict(self) -> dict:
        return {
            "analytic_rate": self.analytic_rate,
            "tolerance": self.tolerance,
            "pairwise_tolerance": self.pairwise_tolerance,
            "max_pairwise_spread": self.max_pairwise_spread,
            "passed": self.passed,
            "cases": [
                {"label": c.label, "rate": c.rate, "stderr": c.stderr, "r_squared": c.r_squared,
                 "relative_error": c.relative_error, "backend": c.series.backend}
                for c in self.cases
            ],
        }


def standard_cases(grid: int = 256, lambda_1d: float = 0.01, r_c: float = 1.0, t_end: float = 0.5) -> dict:
    """Free Gaussian, excited oscillator in a harmonic well, and a free two-packet superposition."""
    common = dict(grid_points=grid, r_c=r_c, lambda_1d=lambda_1d, t_end=t_end)
    return {
        "free_gaussian": SimConfig(box_length=64.0, initial_state=GaussianState(width=1.0), **common),
        "harmonic_excited_n2": SimConfig(box_length=40.0, potential=Potential.harmonic(1.0),
                                         initial_state=OscillatorState(2, 1.0), **common),
        "free_superposition": SimConfig(box_length=64.0, initial_state=SuperpositionState(8.0, 1.0), **common),
    }


def run_independence_check(grid: int = 256, lambda_1d: float = 0.01, r_c: float = 1.0, t_end: float = 0.5,
                           tolerance: float = 0.02, pairwise_tolerance: float = 0.01,
                           backend: str | None = None) -> IndependenceReport:
    expected = analytic_heating_rate(lambda_1d, r_c)
    cases = []
    for label, config in standard_cases(grid, lambda_1d, r_c, t_end).items():
        series = evolve(config, backend=backend)
        fit = measure_heating_rate(series)
        rel = abs(fit.rate - expected) / expected if expected else abs(fit.rate)
        cases.append(CaseResult(label, fit.rate, fit.stderr, fit.r_squared, rel, series))
    return IndependenceReport(expected, tuple(cases), tolerance, pairwise_tolerance)
