"""Apparent magnitude <-> luminosity <-> blackbody surface temperature.

Magnitudes are treated as bolometric, with the IAU solar zero point held in
the constants profile. No band, extinction or bolometric correction is
applied; every result dict produced for users repeats that assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CODATA, PhysicalConstants
from .thermal import StarModel, radiated_power

__all__ = [
    "BOLOMETRIC_ASSUMPTION",
    "Observation",
    "distance_modulus",
    "luminosity_from_magnitude",
    "temperature_from_luminosity",
    "magnitude_from_luminosity",
    "magnitude_from_temperature",
]

BOLOMETRIC_ASSUMPTION = (
    "apparent magnitudes treated as bolometric (M_bol_sun zero point, no band or extinction correction)"
)


@dataclass(frozen=True)
class Observation:
    """An apparent magnitude seen at a distance, with an assumed stellar radius.

    Distances are in metres; use :meth:`at_parsec` for the usual units.
    """

    apparent_magnitude: float
    distance: float
    radius_assumed: float = 1.0e4

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError(f"distance must be positive, got {self.distance!r}")
        if not self.radius_assumed > 0:
            raise ValueError(f"radius must be positive, got {self.radius_assumed!r}")

    @classmethod
    def at_parsec(cls, magnitude: float, distance_pc: float, radius_m: float = 1.0e4,
                  constants: PhysicalConstants = CODATA) -> "Observation":
        return cls(magnitude, distance_pc * constants.parsec, radius_m)


def distance_modulus(distance: float, constants: PhysicalConstants = CODATA) -> float:
    """``m - M = 5 log10(d / 10 pc)`` for ``distance`` in metres."""
    if not distance > 0:
        raise ValueError(f"distance must be positive, got {distance!r}")
    return 5.0 * math.log10(distance / (10.0 * constants.parsec))


def luminosity_from_magnitude(obs: Observation, constants: PhysicalConstants = CODATA) -> float:
    absolute = obs.apparent_magnitude - distance_modulus(obs.distance, constants)
    return constants.L_sun * 10.0 ** ((constants.M_bol_sun - absolute) / 2.5)


def magnitude_from_luminosity(L: float, distance: float, constants: PhysicalConstants = CODATA) -> float:
    if not L > 0:
        raise ValueError(f"luminosity must be positive, got {L!r}")
    absolute = constants.M_bol_sun - 2.5 * math.log10(L / constants.L_sun)
    return absolute + distance_modulus(distance, constants)


def temperature_from_luminosity(L: float, star: StarModel, constants: PhysicalConstants = CODATA) -> float:
    """Surface temperature of a grey body of the star's radiating area emitting ``L`` watts."""
    if L < 0:
        raise ValueError(f"luminosity must be non-negative, got {L!r}")
    return (L / (star.emissivity * star.area * constants.sigma_SB)) ** 0.25


def magnitude_from_temperature(T: float, star: StarModel, distance: float,
                               constants: PhysicalConstants = CODATA) -> float:
    """Apparent bolometric magnitude of a star at temperature ``T`` seen from ``distance`` (m)."""
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T!r}")
    return magnitude_from_luminosity(radiated_power(star, T, constants), distance, constants)
