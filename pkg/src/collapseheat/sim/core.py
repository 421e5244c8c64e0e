"""One particle in 1D under a CSL-type decoherence term, on a periodic grid.

Units are hbar = m = 1 throughout this module. The single-particle master
equation is

    d rho/dt = -i [H, rho] - Gamma(x - y) rho(x, y),
    Gamma(s) = lambda_1d (1 - exp(-s^2 / (4 r_c^2))),

which is the Gaussian-kernel decoherence term written in the position basis.
Its heating rate d<H>/dt = Gamma''(0)/2 = lambda_1d / (4 r_c^2) does not depend
on the state or on the potential. The 3D CSL rate is three times the
per-dimension rate (see :func:`per_dimension_to_3d`).

The kinetic term is applied spectrally, the potential is diagonal, and time
stepping is classical RK4 with a fixed step satisfying dt * max|eig H| <= 0.1.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft
from scipy.special import eval_hermite

from ._backend import get_backend

__all__ = [
    "SimulationError",
    "Potential",
    "GaussianState",
    "OscillatorState",
    "SuperpositionState",
    "SimConfig",
    "DensityMatrixState",
    "SimSeries",
    "HeatingRate",
    "decoherence_rates",
    "decoherence_superoperator",
    "hamiltonian_matrix",
    "max_stable_dt",
    "evolve",
    "measure_heating_rate",
    "analytic_heating_rate",
    "per_dimension_to_3d",
    "energy_scale_si",
]

DT_SAFETY = 0.1
TRACE_ABORT = 1e-8
HERMITICITY_ABORT = 1e-8
EDGE_WIDTHS = 5.0
BAND_TAIL = 1e-12


class SimulationError(RuntimeError):
    pass


class PotentialKind(str, enum.Enum):
    FREE = "free"
    HARMONIC = "harmonic"
    TABLE = "table"


@dataclass(frozen=True)
class Potential:
    kind: PotentialKind = PotentialKind.FREE
    omega: float = 1.0
    values: tuple | None = None

    @classmethod
    def free(cls):
        return cls(PotentialKind.FREE)

    @classmethod
    def harmonic(cls, omega: float = 1.0):
        return cls(PotentialKind.HARMONIC, omega=omega)

    @classmethod
    def table(cls, values):
        return cls(PotentialKind.TABLE, values=tuple(float(v) for v in values))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.kind is PotentialKind.FREE:
            return np.zeros_like(x)
        if self.kind is PotentialKind.HARMONIC:
            return 0.5 * self.omega**2 * x**2
        if self.values is None or len(self.values) != len(x):
            raise ValueError("tabulated potential must have one value per grid point")
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class GaussianState:
    """Minimum-uncertainty packet; ``width`` is the position standard deviation."""

    x0: float = 0.0
    p0: float = 0.0
    width: float = 1.0

    def wavefunction(self, x):
        return np.exp(-((x - self.x0) ** 2) / (4.0 * self.width**2) + 1j * self.p0 * x)


@dataclass(frozen=True)
class OscillatorState:
    """Harmonic-oscillator eigenstate ``n`` for frequency ``omega``."""

    n: int = 2
    omega: float = 1.0

    def wavefunction(self, x):
        xi = math.sqrt(self.omega) * x
        return eval_hermite(self.n, xi) * np.exp(-xi**2 / 2.0) + 0j


@dataclass(frozen=True)
class SuperpositionState:
    """Equal-weight superposition of two Gaussian packets at ``+-separation/2``."""

    separation: float = 8.0
    width: float = 1.0
    p0: float = 0.0

    def wavefunction(self, x):
        half = self.separation / 2.0
        left = GaussianState(-half, self.p0, self.width).wavefunction(x)
        right = GaussianState(half, -self.p0, self.width).wavefunction(x)
        return left + right


@dataclass(frozen=True)
class SimConfig:
    grid_points: int = 256
    box_length: float = 64.0
    r_c: float = 1.0
    lambda_1d: float = 0.01
    potential: Potential = field(default_factory=Potential.free)
    dt: float | None = None
    t_end: float = 1.0
    initial_state: object = field(default_factory=GaussianState)
    n_samples: int = 101

    def __post_init__(self):
        n = self.grid_points
        if n < 4 or n & (n - 1):
            raise ValueError(f"grid_points must be a power of two, got {n}")
        if not (self.box_length > 0 and self.r_c > 0 and self.t_end > 0):
            raise ValueError("box_length, r_c and t_end must be positive")
        if self.lambda_1d < 0:
            raise ValueError("lambda_1d must be non-negative")
        if self.dx > self.r_c / 4.0:
            raise ValueError(f"grid spacing {self.dx:g} does not resolve r_c={self.r_c:g} (need dx <= r_c/4)")
        if self.n_samples < 2:
            raise ValueError("n_samples must be at least 2")

    @property
    def dx(self) -> float:
        return self.box_length / self.grid_points

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.grid_points) - self.grid_points // 2) * self.dx

    @property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.grid_points, self.dx)


@dataclass
class DensityMatrixState:
    rho: np.ndarray
    time: float = 0.0

    @classmethod
    def pure(cls, psi: np.ndarray, dx: float) -> "DensityMatrixState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / math.sqrt(np.sum(np.abs(psi) ** 2))
        return cls(np.ascontiguousarray(np.outer(psi, psi.conj())))

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    @property
    def purity(self) -> float:
        return float(np.sum(np.abs(self.rho) ** 2))

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))


def decoherence_rates(x: np.ndarray, lambda_1d: float, r_c: float, box_length: float | None = None) -> np.ndarray:
    """``Gamma(x_i - x_j)``, using minimum-image separations when ``box_length`` is given."""
    s = x[:, None] - x[None, :]
    if box_length is not None:
        s = (s + box_length / 2.0) % box_length - box_length / 2.0
    return lambda_1d * -np.expm1(-(s**2) / (4.0 * r_c**2))


def decoherence_superoperator(rho: np.ndarray, lambda_1d: float, r_c: float, x: np.ndarray,
                              box_length: float | None = None) -> np.ndarray:
    """Contribution ``-Gamma(x_i - x_j) rho_ij`` of the collapse term to d rho/dt."""
    return -decoherence_rates(x, lambda_1d, r_c, box_length) * rho


def hamiltonian_matrix(config: SimConfig) -> np.ndarray:
    """Dense grid Hamiltonian (spectral kinetic term plus diagonal potential)."""
    n = config.grid_points
    t = 0.5 * config.k**2
    kinetic = sfft.ifft(t[:, None] * sfft.fft(np.eye(n), axis=0), axis=0).real
    return kinetic + np.diag(config.potential(config.x))


def max_stable_dt(config: SimConfig) -> float:
    h = hamiltonian_matrix(config)
    eig = np.linalg.eigvalsh(0.5 * (h + h.T))
    return DT_SAFETY / float(np.max(np.abs(eig)))


def analytic_heating_rate(lambda_1d: float, r_c: float) -> float:
    """Per-dimension heating rate ``lambda_1d / (4 r_c^2)`` (hbar = m = 1)."""
    return lambda_1d / (4.0 * r_c**2)


def per_dimension_to_3d(rate: float) -> float:
    """An isotropic 3D kernel heats three independent directions at the per-dimension rate."""
    return 3.0 * rate


def energy_scale_si(mass_kg: float, length_m: float, hbar: float = 1.054571817e-34) -> tuple[float, float]:
    """SI energy (J) and time (s) units for natural units with hbar = m = 1 and unit length ``length_m``.

    Multiply a simulated heating rate by ``energy / time`` to obtain watts.
    """
    energy = hbar**2 / (mass_kg * length_m**2)
    return energy, hbar / energy


@dataclass
class SimSeries:
    t: np.ndarray
    energy: np.ndarray
    trace_err: np.ndarray
    purity: np.ndarray
    hermiticity_err: np.ndarray
    dt: float
    config: SimConfig
    backend: str

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t,energy,trace_err,purity\n")
            for row in zip(self.t, self.energy, self.trace_err, self.purity):
                fh.write(",".join(f"{v:.12e}" for v in row) + "\n")


def _check_band_limit(psi, config):
    pk = np.abs(np.fft.fft(psi)) ** 2
    pk /= pk.sum()
    cut = 0.5 * np.pi / config.dx
    tail = float(pk[np.abs(config.k) > cut].sum())
    if tail > BAND_TAIL:
        raise SimulationError(f"initial state has momentum weight {tail:.2e} above 0.5*pi/dx; refine the grid")


def _check_edges(rho, config, time):
    p = np.real(np.diagonal(rho))
    x = config.x
    mean = float(np.sum(p * x))
    std = math.sqrt(max(float(np.sum(p * (x - mean) ** 2)), 0.0))
    if abs(mean) + EDGE_WIDTHS * std > config.box_length / 2.0:
        raise SimulationError(
            f"state within {EDGE_WIDTHS:g} widths of the periodic boundary at t={time:g} "
            f"(mean {mean:.3g}, width {std:.3g}, half-box {config.box_length / 2:.3g})"
        )


def evolve(config: SimConfig, backend: str | None = None) -> SimSeries:
    """Integrate the master equation from ``config.initial_state`` up to ``config.t_end``.

    Records energy ``tr(H rho)``, trace error and purity at ``n_samples`` equally
    spaced times, t = 0 included. Raises :class:`SimulationError` when the trace
    or Hermiticity drifts beyond 1e-8 or the state approaches the box edge.
    """
    kern = get_backend(backend)
    x = config.x
    n = config.grid_points
    dt_max = max_stable_dt(config)
    if config.dt is not None:
        if config.dt > dt_max * (1 + 1e-12):
            raise ValueError(f"dt={config.dt:g} violates dt*max|eig H| <= {DT_SAFETY} (max dt {dt_max:g})")
        dt_max = config.dt
    intervals = config.n_samples - 1
    stride = max(1, math.ceil(config.t_end / dt_max / intervals))
    nsteps = stride * intervals
    dt = config.t_end / nsteps

    psi = config.initial_state.wavefunction(x)
    _check_band_limit(psi, config)
    rho = DensityMatrixState.pure(psi, config.dx).rho
    kin = 0.5 * config.k**2
    v = config.potential(x)
    dv = np.ascontiguousarray(v[:, None] - v[None, :])
    gamma = np.ascontiguousarray(decoherence_rates(x, config.lambda_1d, config.r_c, config.box_length))

    acc = np.empty_like(rho)
    stage = np.empty_like(rho)

    def row_kinetic(r):
        # rho @ T, applied row by row in Fourier space
        b = sfft.fft(r, axis=1)
        b *= kin
        return sfft.ifft(b, axis=1, overwrite_x=True)

    rec = {"t": [], "energy": [], "trace_err": [], "purity": [], "herm": []}

    def record(step):
        t = step * dt
        diag = np.diagonal(rho)
        energy = float(np.trace(row_kinetic(rho)).real + np.dot(v, diag.real))
        trace_err = abs(float(np.sum(diag).real) - 1.0)
        herm = float(kern.hermiticity_error(rho))
        if trace_err > TRACE_ABORT:
            raise SimulationError(f"trace drifted by {trace_err:.2e} at t={t:g}")
        if herm > HERMITICITY_ABORT:
            raise SimulationError(f"Hermiticity violated by {herm:.2e} at t={t:g}")
        _check_edges(rho, config, t)
        rec["t"].append(t)
        rec["energy"].append(energy)
        rec["trace_err"].append(trace_err)
        rec["purity"].append(float(np.vdot(rho, rho).real))
        rec["herm"].append(herm)

    # (weight into acc, offset of the next stage input)
    tableau = ((dt / 6.0, 0.5 * dt), (dt / 3.0, 0.5 * dt), (dt / 3.0, dt), (dt / 6.0, 0.0))
    record(0)
    for step in range(1, nsteps + 1):
        acc[...] = rho
        stage[...] = rho
        for i, (weight, alpha) in enumerate(tableau):
            a = row_kinetic(stage)
            kern.rk4_stage(a, stage, dv, gamma, acc, weight, rho, alpha, i < 3)
        rho, acc = acc, rho
        if step % stride == 0:
            record(step)

    backend_name = "cython" if kern.__name__.endswith("_kernels") else "numpy"
    return SimSeries(
        t=np.array(rec["t"]),
        energy=np.array(rec["energy"]),
        trace_err=np.array(rec["trace_err"]),
        purity=np.array(rec["purity"]),
        hermiticity_err=np.array(rec["herm"]),
        dt=dt,
        config=config,
        backend=backend_name,
    )


@dataclass(frozen=True)
class HeatingRate:
    rate: float
    stderr: float
    r_squared: float
    n_samples: int

    @property
    def linear(self) -> bool:
        return self.r_squared >= 0.99


def measure_heating_rate(series) -> HeatingRate:
    """Least-squares slope of energy against time, with its standard error.

    Accepts a :class:`SimSeries` or a ``(t, energy)`` pair. A flat series has
    R^2 = 1 by convention. Warns when R^2 < 0.99.
    """
    if isinstance(series, SimSeries):
        t, e = series.t, series.energy
    else:
        t, e = (np.asarray(a, dtype=float) for a in series)
    n = len(t)
    if n < 50:
        raise ValueError(f"need at least 50 samples to fit a heating rate, got {n}")
    tc = t - t.mean()
    ec = e - e.mean()
    sxx = float(np.dot(tc, tc))
    slope = float(np.dot(tc, ec)) / sxx
    resid = ec - slope * tc
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(ec, ec))
    scale = max(float(np.max(np.abs(e))), 1e-300)
    if ss_tot <= n * (1e-13 * scale) ** 2:
        r2 = 1.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    stderr = math.sqrt(ss_res / (n - 2) / sxx)
    out = HeatingRate(slope, stderr, r2, n)
    if not out.linear:
        warnings.warn(f"energy series is not linear in time (R^2 = {r2:.4f}); grid or step likely inadequate",
                      RuntimeWarning, stacklevel=2)
    return out
