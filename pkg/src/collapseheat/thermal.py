"""Stefan-Boltzmann heat balance for a lumped, isothermal star."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .constants import CODATA, PhysicalConstants

__all__ = [
    "AreaModel",
    "StarModel",
    "DEFAULT_STAR",
    "load_star",
    "radiated_power",
    "equilibrium_temperature",
    "max_heating_power",
]


class AreaModel(str, enum.Enum):
    FULL_SPHERE = "full_sphere"
    DISK = "disk"


@dataclass(frozen=True)
class StarModel:
    """Mass, radius and radiating surface of a star.

    ``n_baryons`` defaults to ``mass / m_neutron``. ``area_model='disk'``
    radiates from ``pi R^2`` instead of the full ``4 pi R^2``.
    """

    name: str
    mass: float
    radius: float
    n_baryons: float | None = None
    emissivity: float = 1.0
    area_model: AreaModel = AreaModel.FULL_SPHERE

    def __post_init__(self):
        if not (self.mass > 0 and self.radius > 0):
            raise ValueError("star mass and radius must be positive")
        if not 0 < self.emissivity <= 1:
            raise ValueError(f"emissivity must lie in (0, 1], got {self.emissivity!r}")
        object.__setattr__(self, "area_model", AreaModel(self.area_model))
        if self.n_baryons is None:
            object.__setattr__(self, "n_baryons", self.mass / CODATA.m_neutron)
        elif not self.n_baryons > 0:
            raise ValueError("n_baryons must be positive")

    @property
    def area(self) -> float:
        if self.area_model is AreaModel.DISK:
            return math.pi * self.radius**2
        return 4.0 * math.pi * self.radius**2

    def with_area(self, area_model) -> "StarModel":
        return StarModel(self.name, self.mass, self.radius, self.n_baryons, self.emissivity, AreaModel(area_model))

    @classmethod
    def from_dict(cls, data: dict) -> "StarModel":
        unknown = set(data) - {"name", "mass_kg", "radius_m", "n_baryons", "emissivity", "area_model"}
        if unknown:
            raise ValueError(f"unknown star fields: {sorted(unknown)}")
        try:
            return cls(
                name=str(data.get("name", "star")),
                mass=float(data["mass_kg"]),
                radius=float(data["radius_m"]),
                n_baryons=None if data.get("n_baryons") is None else float(data["n_baryons"]),
                emissivity=float(data.get("emissivity", 1.0)),
                area_model=data.get("area_model", "full_sphere"),
            )
        except KeyError as exc:
            raise ValueError(f"star description is missing {exc.args[0]!r}") from None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "mass_kg": self.mass,
            "radius_m": self.radius,
            "n_baryons": self.n_baryons,
            "emissivity": self.emissivity,
            "area_model": self.area_model.value,
        }


# N is given explicitly (not mass/m_n) to keep the usual 1e57 rounding.
DEFAULT_STAR = StarModel("default", mass=2.0e30, radius=1.0e4, n_baryons=1e57)


def load_star(spec: str | Path) -> StarModel:
    """Return the built-in star for ``'default'``, otherwise parse a JSON file."""
    if str(spec) == "default":
        return DEFAULT_STAR
    with open(spec, encoding="utf-8") as fh:
        return StarModel.from_dict(json.load(fh))


def radiated_power(star: StarModel, T: float, constants: PhysicalConstants = CODATA) -> float:
    """Grey-body power ``emissivity * S * sigma * T^4`` in watts."""
    if T < 0:
        raise ValueError(f"temperature must be non-negative, got {T!r}")
    return star.emissivity * star.area * constants.sigma_SB * T**4


def equilibrium_temperature(star: StarModel, p_heat: float, constants: PhysicalConstants = CODATA) -> float:
    """Temperature at which radiation balances a heating power ``p_heat`` (W)."""
    if p_heat < 0:
        raise ValueError(f"heating power must be non-negative, got {p_heat!r}")
    return (p_heat / (star.emissivity * star.area * constants.sigma_SB)) ** 0.25


def max_heating_power(star: StarModel, T_obs: float, constants: PhysicalConstants = CODATA) -> float:
    """Largest internal heating compatible with an equilibrium surface temperature ``T_obs``."""
    if not T_obs > 0:
        raise ValueError(f"observed temperature must be positive, got {T_obs!r}")
    return radiated_power(star, T_obs, constants)
