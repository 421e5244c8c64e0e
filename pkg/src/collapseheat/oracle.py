"""Numerical checks of the Laplacian-at-origin coefficient ``-2 Laplacian f_rc(0)``.

The heating power of either collapse model is ``hbar^2/2 * m * C * N`` with
``C = -2 Laplacian f_rc(0)``. The closed forms in :mod:`collapseheat.models`
are checked here by two routes that never touch those closed forms:

* central finite differences of the radial kernel in position space
  (for a smooth isotropic function the Laplacian at 0 is ``3 f''(0)``);
* adaptive quadrature of the kernel's Fourier representation.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from .constants import CODATA, PhysicalConstants
from .models import (
    CollapseParams,
    Model,
    heating_power,
    kernel_csl_regularized,
    kernel_dp_fourier_integrand,
    kernel_dp_regularized,
    laplacian_coefficient_csl,
    laplacian_coefficient_dp,
    lambda_from_gamma,
    regulator,
)

__all__ = [
    "Method",
    "OracleReport",
    "QuadratureError",
    "FD_TOLERANCE",
    "QUADRATURE_TOLERANCE",
    "FAIL_THRESHOLD",
    "fd_laplacian_coefficient",
    "fd_gradient_at_origin",
    "laplacian_at_origin_csl",
    "laplacian_at_origin_csl_fourier",
    "laplacian_at_origin_dp",
    "laplacian_at_origin_dp_fd",
    "gaussian_second_moment",
    "self_convolution_numeric",
    "verify_heating_coefficients",
    "all_passed",
]

FD_TOLERANCE = 1e-6
QUADRATURE_TOLERANCE = 1e-8
FAIL_THRESHOLD = 1e-5
# step = r_c * FD_STEP_RATIO keeps O(h^2) truncation near 1e-7 and cancellation error near 1e-9
FD_STEP_RATIO = 1e-3


class Method(str, enum.Enum):
    FINITE_DIFFERENCE = "finite_difference"
    FOURIER_QUADRATURE = "fourier_quadrature"


class QuadratureError(RuntimeError):
    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved relative error estimate {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class OracleReport:
    model: Model
    method: Method
    r_c: float
    analytic_value: float
    numeric_value: float
    relative_error: float
    tolerance: float
    power_per_particle_W: float
    power_numeric_W: float
    power_relative_error: float

    @property
    def passed(self) -> bool:
        return self.relative_error <= self.tolerance and self.power_relative_error <= self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["model"] = self.model.value
        d["method"] = self.method.value
        d["passed"] = self.passed
        return d


def fd_laplacian_coefficient(kernel, step: float) -> float:
    """``-2 * 3 f''(0)`` by a central second difference of an even radial function."""
    f0 = kernel(0.0)
    fh = kernel(step)
    # f is even, so f(-h) = f(h)
    second = 2.0 * (fh - f0) / step**2
    return -6.0 * second


def fd_gradient_at_origin(kernel, step: float) -> float:
    """One-sided radial slope ``(f(h) - f(0)) / h``; tends to 0 linearly in h for a smooth isotropic kernel."""
    return (kernel(step) - kernel(0.0)) / step


def _check_step(step, r_c):
    if not 0 < step < r_c / 10:
        raise ValueError(f"finite-difference step {step!r} must satisfy 0 < step < r_c/10 = {r_c / 10!r}")


def laplacian_at_origin_csl(r_c: float, gamma: float, m: float, step: float | None = None) -> float:
    """Finite-difference ``-2 Laplacian f^CSL_rc(0)``."""
    step = r_c * FD_STEP_RATIO if step is None else step
    _check_step(step, r_c)
    return fd_laplacian_coefficient(lambda s: kernel_csl_regularized(s, r_c, gamma, m), step)


def laplacian_at_origin_dp_fd(r_c: float, prefactor: float = 0.25, constants: PhysicalConstants = CODATA,
                              step: float | None = None) -> float:
    """Finite-difference ``-2 Laplacian f^DP_rc(0)`` on the position-space erf kernel."""
    step = r_c * FD_STEP_RATIO if step is None else step
    _check_step(step, r_c)
    return fd_laplacian_coefficient(lambda s: kernel_dp_regularized(s, r_c, constants, prefactor), step)


def _radial_quad(func, tol):
    """Integrate ``func(u)`` over ``u`` in [0, inf) and enforce a relative tolerance."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            # quadpack refuses epsrel below 50 * machine epsilon
            epsrel = max(min(tol, 1e-10) / 10, 1e-13)
            value, abserr = integrate.quad(func, 0.0, np.inf, epsabs=0.0, epsrel=epsrel, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge: {exc}", float("nan")) from None
    achieved = abserr / abs(value) if value else float("inf")
    if achieved > tol:
        raise QuadratureError("quadrature missed the requested tolerance", achieved)
    return value


def gaussian_second_moment(r_c: float, tol: float = 1e-10) -> float:
    """``int_0^inf k^2 exp(-k^2 r_c^2) dk`` by adaptive quadrature (closed form sqrt(pi)/(4 r_c^3))."""
    # k = u / r_c keeps the integrand O(1)
    return _radial_quad(lambda u: u * u * math.exp(-u * u), tol) / r_c**3


def laplacian_at_origin_dp(r_c: float, prefactor: float = 0.25, constants: PhysicalConstants = CODATA,
                           quadrature_tol: float = 1e-10) -> float:
    """Fourier-quadrature ``-2 Laplacian f^DP_rc(0)``.

    Integrates the k-space density of ``-Laplacian f`` over shells ``4 pi k^2 dk``.
    """
    if not quadrature_tol > 0:
        raise ValueError("quadrature_tol must be positive")

    def shell(u):
        k = u / r_c
        return 4.0 * math.pi * k * k * kernel_dp_fourier_integrand(k, r_c, constants, prefactor) / r_c

    return 2.0 * _radial_quad(shell, quadrature_tol)


def laplacian_at_origin_csl_fourier(r_c: float, gamma: float, m: float, quadrature_tol: float = 1e-10) -> float:
    """Fourier-quadrature ``-2 Laplacian f^CSL_rc(0)``.

    The Fourier transform of ``gamma/(2 m^2) g*g`` is ``gamma/(2 m^2) exp(-k^2 r_c^2)``; the
    Laplacian brings down ``k^2``.
    """
    amp = gamma / (2.0 * m**2)

    def shell(u):
        k = u / r_c
        return 4.0 * math.pi * k**2 * k**2 * amp * math.exp(-u * u) / (2.0 * math.pi) ** 3 / r_c

    return 2.0 * _radial_quad(shell, quadrature_tol)


def self_convolution_numeric(s: float, r: float, epsrel: float = 1e-12) -> float:
    """``(g_r * g_r)(s)`` for the 3D Gaussian regulator by direct radial integration.

    Uses ``(a*b)(s) = (2 pi / s) int dy y a(y) int_{|s-y|}^{s+y} dt t b(t)`` and, at
    ``s = 0``, ``4 pi int dy y^2 a(y) b(y)``. Lengths are scaled by ``r`` internally.
    """
    if s < 0:
        raise ValueError("separation must be non-negative")
    g1 = lambda u: float(regulator(u, 1.0))
    x = s / r
    top = x + 14.0
    if x == 0.0:
        val, _ = integrate.quad(lambda y: 4.0 * math.pi * y * y * g1(y) ** 2, 0.0, top, epsabs=0.0, epsrel=epsrel,
                                limit=200)
    else:
        def inner(y):
            v, _ = integrate.quad(lambda t: t * g1(t), abs(x - y), x + y, epsabs=0.0, epsrel=epsrel, limit=200)
            return y * g1(y) * v

        pts = [x] if x < top else None
        val, _ = integrate.quad(inner, 0.0, top, epsabs=0.0, epsrel=epsrel, limit=200, points=pts)
        val *= 2.0 * math.pi / x
    return val / r**3


# (lambda, r_c) for CSL and r_c for DP
CSL_TEST_SET = ((1e-16, 1e-9), (1e-16, 1e-7), (1e-8, 1e-5))
DP_TEST_SET = (1e-9, 1e-7, 1e-5)


def _report(model, method, r_c, analytic, numeric, tol, params, constants):
    per_particle = heating_power(params, 1.0, constants)
    chain = 0.5 * constants.hbar**2 * constants.m_neutron * numeric
    rel = abs(numeric - analytic) / abs(analytic) if analytic else abs(numeric)
    prel = abs(chain - per_particle) / abs(per_particle) if per_particle else abs(chain)
    return OracleReport(model, method, r_c, analytic, numeric, rel, tol, per_particle, chain, prel)


def verify_heating_coefficients(constants: PhysicalConstants = CODATA, prefactor: float = 0.25) -> list[OracleReport]:
    """Compare both numeric routes with the closed forms over a fixed parameter set.

    Each report also carries the per-particle power ``hbar^2/2 m C`` built from
    the numeric coefficient next to the model's closed-form heating power for N=1.
    """
    m = constants.m_neutron
    reports = []
    for lam, r_c in CSL_TEST_SET:
        params = CollapseParams.csl(lam, r_c)
        analytic = laplacian_coefficient_csl(lambda_from_gamma(params.gamma, r_c), r_c, m)
        fd = laplacian_at_origin_csl(r_c, params.gamma, m)
        fq = laplacian_at_origin_csl_fourier(r_c, params.gamma, m)
        reports.append(_report(Model.CSL, Method.FINITE_DIFFERENCE, r_c, analytic, fd, FD_TOLERANCE, params,
                               constants))
        reports.append(_report(Model.CSL, Method.FOURIER_QUADRATURE, r_c, analytic, fq, QUADRATURE_TOLERANCE,
                               params, constants))
    for r_c in DP_TEST_SET:
        params = CollapseParams.dp(r_c, prefactor)
        analytic = laplacian_coefficient_dp(r_c, constants, prefactor)
        fd = laplacian_at_origin_dp_fd(r_c, prefactor, constants)
        fq = laplacian_at_origin_dp(r_c, prefactor, constants)
        reports.append(_report(Model.DP, Method.FINITE_DIFFERENCE, r_c, analytic, fd, FD_TOLERANCE, params,
                               constants))
        reports.append(_report(Model.DP, Method.FOURIER_QUADRATURE, r_c, analytic, fq, QUADRATURE_TOLERANCE,
                               params, constants))
    return reports


def all_passed(reports) -> bool:
    """A run fails if any report misses its tolerance or exceeds the hard 1e-5 ceiling."""
    return all(r.passed and r.relative_error <= FAIL_THRESHOLD and r.power_relative_error <= FAIL_THRESHOLD
               for r in reports)
