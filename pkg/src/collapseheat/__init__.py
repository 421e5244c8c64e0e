"""Collapse-model heating of neutron stars.

Heating powers for the CSL and Diosi-Penrose models, Stefan-Boltzmann
equilibrium temperatures, parameter exclusion bounds, survey magnitude
arithmetic, and numerical checks of the heating coefficient.
"""

from .bounds import (
    BUILTIN_SCENARIOS,
    ExclusionCurve,
    TemperatureScenario,
    build_exclusion_curve,
    csl_lambda_crit,
    dp_gravitational_upper_bound,
    dp_rc_min,
    is_excluded,
)
from .constants import CODATA, PAPER, PhysicalConstants, Quantity, default_constants
from .models import (
    CollapseParams,
    KernelSpec,
    Model,
    gamma_from_lambda,
    heating_power,
    heating_power_csl,
    heating_power_dp,
    kernel_csl_regularized,
    kernel_dp_fourier_integrand,
    kernel_dp_regularized,
    lambda_from_gamma,
)
from .observe import (
    Observation,
    luminosity_from_magnitude,
    magnitude_from_temperature,
    temperature_from_luminosity,
)
from .thermal import DEFAULT_STAR, StarModel, equilibrium_temperature, max_heating_power, radiated_power

__version__ = "0.1.0"
