"""CSL and Diosi-Penrose collapse models: parameters, regularized kernels, heating power.

Kernels are radial functions of the separation ``s = |x - y|``. The regularized
kernel ``f_rc = g_rc * f * g_rc`` is what enters the master equation once the
Gaussian smearing of the mass density has been moved onto the kernel.

The heating power of N non-relativistic particles of mass m is

    P = (hbar^2 / 2) * m * (-2 Laplacian f_rc at 0) * N,

independent of the potential and of the state. The closed forms below are
that expression evaluated for each kernel; :mod:`collapseheat.oracle` checks
them numerically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .constants import CODATA, PhysicalConstants

__all__ = [
    "Model",
    "CollapseParams",
    "KernelSpec",
    "DP_PREFACTORS",
    "lambda_from_gamma",
    "gamma_from_lambda",
    "heating_power",
    "heating_power_csl",
    "heating_power_dp",
    "regulator",
    "kernel_csl_regularized",
    "kernel_dp_regularized",
    "kernel_dp_fourier_integrand",
    "laplacian_coefficient_csl",
    "laplacian_coefficient_dp",
]

DP_PREFACTORS = (0.25, 0.125)


class Model(str, enum.Enum):
    CSL = "csl"
    DP = "dp"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown collapse model {value!r}; expected 'csl' or 'dp'") from None


def lambda_from_gamma(gamma: float, r_c: float) -> float:
    """CSL rate ``lambda = gamma / (4 pi r_c^2)^(3/2)``."""
    if not (gamma > 0 and r_c > 0):
        raise ValueError("gamma and r_c must be positive")
    return gamma / (4.0 * math.pi * r_c**2) ** 1.5


def gamma_from_lambda(lam: float, r_c: float) -> float:
    """Inverse of :func:`lambda_from_gamma`."""
    if not (lam > 0 and r_c > 0):
        raise ValueError("lambda and r_c must be positive")
    return lam * (4.0 * math.pi * r_c**2) ** 1.5


@dataclass(frozen=True)
class CollapseParams:
    """Parameters of one collapse model.

    Use :meth:`csl` or :meth:`dp` rather than the raw constructor; ``gamma`` is
    derived from ``lam`` and ``r_c`` for CSL and is ``None`` for DP.
    """

    model: Model
    r_c: float
    lam: float | None = None
    gamma: float | None = None
    dp_prefactor: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        if not (self.r_c > 0 and math.isfinite(self.r_c)):
            raise ValueError(f"r_c must be positive, got {self.r_c!r}")
        if self.model is Model.CSL:
            if self.lam is None or not self.lam > 0 or not math.isfinite(self.lam):
                raise ValueError(f"CSL rate lambda must be positive, got {self.lam!r}")
            object.__setattr__(self, "gamma", gamma_from_lambda(self.lam, self.r_c))
        else:
            if self.dp_prefactor not in DP_PREFACTORS:
                raise ValueError(f"DP prefactor must be one of {DP_PREFACTORS}, got {self.dp_prefactor!r}")
            if self.lam is not None or self.gamma is not None:
                raise ValueError("DP model takes no lambda/gamma; its strength is fixed by G")

    @classmethod
    def csl(cls, lam: float, r_c: float) -> "CollapseParams":
        return cls(Model.CSL, r_c=r_c, lam=lam)

    @classmethod
    def dp(cls, r_c: float, prefactor: float = 0.25) -> "CollapseParams":
        return cls(Model.DP, r_c=r_c, dp_prefactor=prefactor)


@dataclass(frozen=True)
class KernelSpec:
    """Radial regularized kernel ``f_rc(s)`` of one model, in units of 1/(kg^2 s)."""

    model: Model
    r_c: float
    gamma: float | None = None
    dp_prefactor: float = 0.25
    constants: PhysicalConstants = CODATA

    @classmethod
    def from_params(cls, params: CollapseParams, constants: PhysicalConstants = CODATA) -> "KernelSpec":
        return cls(params.model, params.r_c, params.gamma, params.dp_prefactor, constants)

    def __call__(self, s):
        if self.model is Model.CSL:
            return kernel_csl_regularized(s, self.r_c, self.gamma, self.constants.m_neutron)
        return kernel_dp_regularized(s, self.r_c, self.constants, self.dp_prefactor)

    def laplacian_coefficient(self) -> float:
        """Closed-form ``-2 Laplacian f_rc`` at the origin."""
        if self.model is Model.CSL:
            lam = lambda_from_gamma(self.gamma, self.r_c)
            return laplacian_coefficient_csl(lam, self.r_c, self.constants.m_neutron)
        return laplacian_coefficient_dp(self.r_c, self.constants, self.dp_prefactor)


def _check_count(n_baryons):
    if not n_baryons >= 0:
        raise ValueError(f"particle number must be non-negative, got {n_baryons!r}")


def heating_power_csl(params: CollapseParams, n_baryons: float, constants: PhysicalConstants = CODATA) -> float:
    """CSL heating power ``3 lambda hbar^2 N / (4 r_c^2 m)`` in watts."""
    if params.model is not Model.CSL:
        raise ValueError("heating_power_csl needs a CSL parameter set")
    _check_count(n_baryons)
    return 3.0 * params.lam * constants.hbar**2 * n_baryons / (4.0 * params.r_c**2 * constants.m_neutron)


def heating_power_dp(params: CollapseParams, n_baryons: float, constants: PhysicalConstants = CODATA) -> float:
    """DP heating power ``G hbar m N / (8 sqrt(pi) r_c^3)`` in watts, for prefactor 1/4.

    A prefactor of 1/8 halves the result.
    """
    if params.model is not Model.DP:
        raise ValueError("heating_power_dp needs a DP parameter set")
    _check_count(n_baryons)
    scale = params.dp_prefactor / 0.25
    return scale * constants.G * constants.hbar * constants.m_neutron * n_baryons / (
        8.0 * math.sqrt(math.pi) * params.r_c**3
    )


def heating_power(params: CollapseParams, n_baryons: float, constants: PhysicalConstants = CODATA) -> float:
    if params.model is Model.CSL:
        return heating_power_csl(params, n_baryons, constants)
    return heating_power_dp(params, n_baryons, constants)


def regulator(s, r_c: float):
    """Normalized 3D Gaussian smearing function ``g_rc`` at radius ``s``."""
    s = np.asarray(s, dtype=float)
    return np.exp(-(s**2) / (2.0 * r_c**2)) / (2.0 * math.pi * r_c**2) ** 1.5


def kernel_csl_regularized(s, r_c: float, gamma: float, m: float):
    """``gamma/(2 m^2) (g_rc * g_rc)(s)``: a Gaussian of variance ``2 r_c^2``."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("separation must be non-negative")
    out = gamma / (2.0 * m**2 * (4.0 * math.pi * r_c**2) ** 1.5) * np.exp(-(s**2) / (4.0 * r_c**2))
    return out if out.ndim else float(out)


def kernel_dp_regularized(s, r_c: float, constants: PhysicalConstants = CODATA, prefactor: float = 0.25):
    """Gaussian-smeared Newton kernel ``prefactor G/hbar * erf(s/(2 r_c))/s``.

    Finite at the origin, where it equals ``prefactor G/hbar / (sqrt(pi) r_c)``.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("separation must be non-negative")
    c = prefactor * constants.G / constants.hbar
    u = s / (2.0 * r_c)
    small = u < 1e-4
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(small, 0.0, erf(u) / np.where(small, 1.0, u))
    # erf(u)/u = 2/sqrt(pi) (1 - u^2/3 + u^4/10 - ...)
    series = 2.0 / math.sqrt(math.pi) * (1.0 - u**2 / 3.0 + u**4 / 10.0)
    ratio = np.where(small, series, ratio)
    out = c * ratio / (2.0 * r_c)
    return out if out.ndim else float(out)


def kernel_dp_fourier_integrand(k, r_c: float, constants: PhysicalConstants = CODATA, prefactor: float = 0.25,
                                laplacian: bool = True, s: float = 0.0):
    """k-space density of the regularized DP kernel, per unit ``d^3k``.

    With ``laplacian=True`` this is the integrand of ``-Laplacian f_rc`` at the
    origin: the ``k^2`` from the Laplacian cancels the Coulomb ``1/k^2`` pole,
    leaving ``4 pi (prefactor G/hbar) exp(-k^2 r_c^2) / (2 pi)^3``. Otherwise it
    is the integrand of ``f_rc(s)`` itself, angle-averaged, which still carries
    the ``1/k^2`` pole (cancelled by the radial measure ``4 pi k^2``).
    """
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("wavenumber must be non-negative")
    c = 4.0 * math.pi * prefactor * constants.G / constants.hbar / (2.0 * math.pi) ** 3
    weight = np.exp(-(k**2) * r_c**2)
    if laplacian:
        out = c * weight
    else:
        with np.errstate(divide="ignore"):
            out = c * weight / k**2 * np.sinc(k * s / math.pi)
    return out if out.ndim else float(out)


def laplacian_coefficient_csl(lam: float, r_c: float, m: float) -> float:
    """``-2 Laplacian f^CSL_rc(0) = 3 lambda / (2 m^2 r_c^2)``."""
    return 3.0 * lam / (2.0 * m**2 * r_c**2)


def laplacian_coefficient_dp(r_c: float, constants: PhysicalConstants = CODATA, prefactor: float = 0.25) -> float:
    """``-2 Laplacian f^DP_rc(0) = (prefactor/0.25) G / (4 sqrt(pi) hbar r_c^3)``."""
    return (prefactor / 0.25) * constants.G / (4.0 * math.sqrt(math.pi) * constants.hbar * r_c**3)
