"""Physical constants and a minimal dimension-tagged scalar.

Two constant profiles are provided. ``codata`` carries CODATA 2018 / IAU 2015
values and is the default. ``paper`` rounds the Stefan constant and the solar
mass the way order-of-magnitude neutron star estimates usually do, and is
meant for reproduction runs only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

__all__ = [
    "PhysicalConstants",
    "Quantity",
    "DimensionError",
    "CODATA",
    "PAPER",
    "PROFILES",
    "default_constants",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants shared by every computation in the package.

    Attributes
    ----------
    hbar : float
        Reduced Planck constant [J s].
    G : float
        Newton's constant [m^3 kg^-1 s^-2].
    sigma_SB : float
        Stefan-Boltzmann constant [W m^-2 K^-4].
    m_neutron : float
        Neutron mass [kg].
    M_sun : float
        Solar mass [kg].
    L_sun : float
        Nominal solar luminosity [W].
    M_bol_sun : float
        Absolute bolometric magnitude of the Sun.
    parsec : float
        Parsec [m].
    name : str
        Profile label.
    """

    hbar: float
    G: float
    sigma_SB: float
    m_neutron: float
    M_sun: float
    L_sun: float
    M_bol_sun: float
    parsec: float
    name: str = "custom"

    def __post_init__(self):
        for f in fields(self):
            if f.name == "name":
                continue
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"constant {f.name} must be finite and > 0, got {value!r}")


CODATA = PhysicalConstants(
    hbar=1.054571817e-34,
    G=6.67430e-11,
    sigma_SB=5.670374e-8,
    m_neutron=1.67492749804e-27,
    M_sun=1.98847e30,
    L_sun=3.828e26,
    M_bol_sun=4.74,
    parsec=3.0857e16,
    name="codata",
)

PAPER = replace(CODATA, sigma_SB=5.6e-8, M_sun=2.0e30, name="paper")

PROFILES = {"codata": CODATA, "paper": PAPER}


def default_constants(profile: str = "codata") -> PhysicalConstants:
    """Return the shared constants instance for ``profile`` ('codata' or 'paper')."""
    try:
        return PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown constants profile {profile!r}; expected one of {sorted(PROFILES)}") from None


# Base exponents are (kg, m, s, K).
_NAMED_DIMENSIONS = {
    "dimensionless": (0, 0, 0, 0),
    "mass": (1, 0, 0, 0),
    "length": (0, 1, 0, 0),
    "area": (0, 2, 0, 0),
    "time": (0, 0, 1, 0),
    "rate": (0, 0, -1, 0),
    "temperature": (0, 0, 0, 1),
    "power": (1, 2, -3, 0),
    "flux": (1, 0, -3, 0),
    "stefan": (1, 0, -3, -4),
    "strength": (0, 3, -1, 0),
}
# Luminosity is a power; kept as an alias so callers can tag intent.
_ALIASES = {"luminosity": "power"}
_UNIT_SUFFIX = {
    "mass": "kg",
    "length": "m",
    "area": "m2",
    "time": "s",
    "rate": "per_s",
    "temperature": "K",
    "power": "W",
    "flux": "W_per_m2",
    "dimensionless": "",
}


class DimensionError(TypeError):
    """Raised when combining quantities of incompatible dimension."""


def _exponents(dimension) -> tuple:
    if isinstance(dimension, str):
        name = _ALIASES.get(dimension, dimension)
        try:
            return _NAMED_DIMENSIONS[name]
        except KeyError:
            raise ValueError(f"unknown dimension {dimension!r}") from None
    exps = tuple(float(e) for e in dimension)
    if len(exps) != 4:
        raise ValueError("dimension exponents must be (kg, m, s, K)")
    return exps


@dataclass(frozen=True)
class Quantity:
    """A real scalar with a dimension tag.

    Addition and subtraction require identical dimensions; multiplication,
    division and powers combine exponents.

    >>> flux = Quantity(4.0, "power") / Quantity(2.0, "area")
    >>> flux.dimension
    'flux'
    """

    value: float
    exponents: tuple

    def __init__(self, value, dimension="dimensionless"):
        object.__setattr__(self, "value", float(value))
        object.__setattr__(self, "exponents", tuple(float(e) for e in _exponents(dimension)))

    @property
    def dimension(self) -> str:
        for name, exps in _NAMED_DIMENSIONS.items():
            if all(math.isclose(a, b, abs_tol=1e-12) for a, b in zip(self.exponents, exps)):
                return name
        return "kg^{:g} m^{:g} s^{:g} K^{:g}".format(*self.exponents)

    @property
    def unit_suffix(self) -> str:
        return _UNIT_SUFFIX.get(self.dimension, "SI")

    def _check(self, other):
        if not isinstance(other, Quantity):
            other = Quantity(other)
        if other.exponents != self.exponents:
            raise DimensionError(f"cannot combine {self.dimension} with {other.dimension}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Quantity(self.value + other.value, self.exponents)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Quantity(self.value - other.value, self.exponents)

    def __neg__(self):
        return Quantity(-self.value, self.exponents)

    def __mul__(self, other):
        if not isinstance(other, Quantity):
            return Quantity(self.value * other, self.exponents)
        return Quantity(self.value * other.value, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Quantity):
            return Quantity(self.value / other, self.exponents)
        return Quantity(self.value / other.value, tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def __rtruediv__(self, other):
        return Quantity(other, "dimensionless") / self

    def __pow__(self, p):
        return Quantity(self.value ** p, tuple(e * p for e in self.exponents))

    def __lt__(self, other):
        return self.value < self._check(other).value

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"Quantity({self.value!r}, {self.dimension!r})"
