"""Exclusion bounds from temperature scenarios.

A collapse parameter point is excluded by a scenario when the equilibrium
temperature it would force on the star is strictly above the scenario
temperature. For CSL this is a line ``lambda_crit(r_c)`` in the (r_c, lambda)
plane (lambda_crit grows as r_c^2); for DP it is a lower bound on r_c.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constants import CODATA, PhysicalConstants
from .models import CollapseParams, Model, heating_power, heating_power_csl, heating_power_dp
from .thermal import DEFAULT_STAR, StarModel, equilibrium_temperature, max_heating_power

__all__ = [
    "ScenarioKind",
    "TemperatureScenario",
    "ExclusionCurve",
    "BUILTIN_SCENARIOS",
    "DEFAULT_RC_GRID",
    "load_scenarios",
    "rc_grid",
    "csl_lambda_crit",
    "dp_rc_min",
    "dp_gravitational_upper_bound",
    "build_exclusion_curve",
    "is_excluded",
]

GRAVITATIONAL_RC_MAX = 1e-4


class ScenarioKind(str, enum.Enum):
    OBSERVED = "observed"
    SPECULATIVE = "speculative"


@dataclass(frozen=True)
class TemperatureScenario:
    label: str
    temperature: float
    kind: ScenarioKind = ScenarioKind.SPECULATIVE

    def __post_init__(self):
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise ValueError(f"scenario temperature must be positive, got {self.temperature!r}")
        object.__setattr__(self, "kind", ScenarioKind(self.kind))

    def to_dict(self) -> dict:
        return {"label": self.label, "temperature_K": self.temperature, "kind": self.kind.value}


BUILTIN_SCENARIOS = (
    TemperatureScenario("PSR J 840-1419", 2.8e5, ScenarioKind.OBSERVED),
    TemperatureScenario("DES", 2.2e4, ScenarioKind.SPECULATIVE),
    TemperatureScenario("LSST/Sun", 7e3, ScenarioKind.SPECULATIVE),
    TemperatureScenario("Earth", 3e2, ScenarioKind.SPECULATIVE),
    TemperatureScenario("Ultimate/CMB", 5.0, ScenarioKind.SPECULATIVE),
)


def load_scenarios(path: str | Path) -> list[TemperatureScenario]:
    """Parse ``[{"label", "temperature_K", "kind"}, ...]`` from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise ValueError("scenario file must hold a JSON list")
    out = []
    for i, item in enumerate(raw):
        try:
            out.append(TemperatureScenario(str(item["label"]), float(item["temperature_K"]),
                                           item.get("kind", "speculative")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"scenario #{i}: {exc}") from None
    return out


def rc_grid(rc_min: float = 1e-9, rc_max: float = 1e-3, n: int = 200) -> np.ndarray:
    """Log-spaced r_c grid, endpoints included."""
    if not (0 < rc_min < rc_max) or n < 1:
        raise ValueError("need 0 < rc_min < rc_max and n >= 1")
    return np.logspace(math.log10(rc_min), math.log10(rc_max), n)


DEFAULT_RC_GRID = (1e-9, 1e-3, 200)


def csl_lambda_crit(r_c, scenario: TemperatureScenario, star: StarModel = DEFAULT_STAR,
                    constants: PhysicalConstants = CODATA):
    """Largest CSL rate whose heating keeps the star at or below the scenario temperature.

    Equals ``4 r_c^2 m S sigma T^4 / (3 hbar^2 N)``. Vectorized over ``r_c``.
    """
    r_c = np.asarray(r_c, dtype=float)
    if np.any(r_c <= 0):
        raise ValueError("r_c must be positive")
    p_max = max_heating_power(star, scenario.temperature, constants)
    # heating per unit rate, from the same formula used for forward evaluation
    per_rate = np.array([heating_power_csl(CollapseParams.csl(1.0, float(r)), star.n_baryons, constants)
                         for r in r_c.ravel()]).reshape(r_c.shape)
    out = p_max / per_rate
    return out if out.ndim else float(out)


def dp_rc_min(scenario: TemperatureScenario, star: StarModel = DEFAULT_STAR, prefactor: float = 0.25,
              constants: PhysicalConstants = CODATA) -> float:
    """Smallest DP regulator length compatible with the scenario temperature."""
    p_max = max_heating_power(star, scenario.temperature, constants)
    p_unit = heating_power_dp(CollapseParams.dp(1.0, prefactor), star.n_baryons, constants)
    return (p_unit / p_max) ** (1.0 / 3.0)


def dp_gravitational_upper_bound() -> float:
    """Upper bound on the DP regulator from short-distance tests of Newton's law (m)."""
    return GRAVITATIONAL_RC_MAX


def is_excluded(params: CollapseParams, scenario: TemperatureScenario, star: StarModel = DEFAULT_STAR,
                constants: PhysicalConstants = CODATA) -> bool:
    """True when ``params`` heat the star strictly above the scenario temperature."""
    t_eq = equilibrium_temperature(star, heating_power(params, star.n_baryons, constants), constants)
    return t_eq > scenario.temperature


@dataclass(frozen=True)
class ExclusionCurve:
    scenario: TemperatureScenario
    star: StarModel
    model: Model
    samples: tuple = field(default=())
    rc_min: float | None = None

    def __post_init__(self):
        if self.model is Model.CSL:
            rc = np.array([p[0] for p in self.samples])
            lam = np.array([p[1] for p in self.samples])
            if len(rc) == 0 or np.any(np.diff(rc) <= 0) or np.any(np.diff(lam) <= 0):
                raise ValueError("CSL exclusion samples must be non-empty and strictly increasing")
        elif not (self.rc_min and self.rc_min > 0):
            raise ValueError("DP exclusion curve needs a positive rc_min")

    @property
    def rc(self) -> np.ndarray:
        return np.array([p[0] for p in self.samples])

    @property
    def lambda_crit(self) -> np.ndarray:
        return np.array([p[1] for p in self.samples])


def build_exclusion_curve(scenario: TemperatureScenario, star: StarModel = DEFAULT_STAR, model=Model.CSL,
                          rc_values=None, constants: PhysicalConstants = CODATA,
                          prefactor: float = 0.25) -> ExclusionCurve:
    """Sample the exclusion boundary of ``scenario`` on a strictly increasing r_c grid.

    For DP the grid is only validated; the result is the scalar ``rc_min``.
    """
    model = Model.parse(model)
    grid = rc_grid(*DEFAULT_RC_GRID) if rc_values is None else np.asarray(rc_values, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("r_c grid must be a non-empty 1D sequence")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("r_c grid must be positive and strictly increasing")
    if model is Model.DP:
        return ExclusionCurve(scenario, star, model, rc_min=dp_rc_min(scenario, star, prefactor, constants))
    lam = csl_lambda_crit(grid, scenario, star, constants)
    return ExclusionCurve(scenario, star, model, samples=tuple(zip(grid.tolist(), np.atleast_1d(lam).tolist())))
