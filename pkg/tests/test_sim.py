import numpy as np
import pytest
import sympy as sp

from collapseheat.sim import (
    DensityMatrixState,
    GaussianState,
    OscillatorState,
    Potential,
    SimConfig,
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
    run_independence_check,
)
from collapseheat.sim._backend import BACKENDS, get_backend


def test_symbolic_heating_rate_of_gaussian():
    """d<H>/dt from the collapse term, by exact symbolic integration on a moving Gaussian."""
    x, y, x0, p0 = sp.symbols("x y x0 p0", real=True)
    lam, r, sig = sp.symbols("lambda r sigma", positive=True)
    psi = lambda z: (2 * sp.pi * sig**2) ** sp.Rational(-1, 4) * sp.exp(-(z - x0) ** 2 / (4 * sig**2) + sp.I * p0 * z)
    psic = lambda z: (2 * sp.pi * sig**2) ** sp.Rational(-1, 4) * sp.exp(-(z - x0) ** 2 / (4 * sig**2) - sp.I * p0 * z)
    gamma = lam * (1 - sp.exp(-(x - y) ** 2 / (4 * r**2)))
    drho = -gamma * psi(x) * psic(y)
    # tr(T drho) with T = -1/2 d^2/dx^2; the potential term vanishes because Gamma(0) = 0
    integrand = sp.simplify((-sp.Rational(1, 2) * sp.diff(drho, x, 2)).subs(y, x))
    rate = sp.simplify(sp.integrate(integrand, (x, -sp.oo, sp.oo)))
    assert sp.simplify(rate - lam / (4 * r**2)) == 0
    assert analytic_heating_rate(0.3, 1.7) == pytest.approx(0.3 / (4 * 1.7**2), rel=1e-15)


def test_gamma_curvature_at_origin():
    s, lam, r = sp.symbols("s lambda r", positive=True)
    g = lam * (1 - sp.exp(-s**2 / (4 * r**2)))
    assert sp.simplify(sp.diff(g, s, 2).subs(s, 0) - lam / (2 * r**2)) == 0
    # numeric rates agree with the symbolic form and vanish on the diagonal
    xs = np.linspace(-3, 3, 13)
    rates = decoherence_rates(xs, 0.2, 0.7)
    assert np.all(np.diag(rates) == 0)
    assert rates[0, -1] == pytest.approx(0.2 * (1 - np.exp(-36 / (4 * 0.49))), rel=1e-14)


def test_discrete_generator_rate_matches_analytic():
    cfg = SimConfig(grid_points=256, box_length=64.0, r_c=1.0, lambda_1d=0.01)
    for state in (GaussianState(width=1.0), GaussianState(x0=3.0, p0=0.7, width=1.5), SuperpositionState(8.0, 1.0)):
        rho = DensityMatrixState.pure(state.wavefunction(cfg.x), cfg.dx).rho
        d = decoherence_superoperator(rho, cfg.lambda_1d, cfg.r_c, cfg.x, cfg.box_length)
        rate = float(np.trace(hamiltonian_matrix(cfg) @ d).real)
        assert rate == pytest.approx(analytic_heating_rate(0.01, 1.0), rel=1e-9)


def test_minimum_image_separations():
    x = np.array([-7.0, 7.0])
    assert decoherence_rates(x, 1.0, 1.0, box_length=16.0)[0, 1] == pytest.approx(1 - np.exp(-4 / 4), rel=1e-14)


def test_config_validation():
    with pytest.raises(ValueError, match="power of two"):
        SimConfig(grid_points=100)
    with pytest.raises(ValueError, match="resolve"):
        SimConfig(grid_points=64, box_length=64.0, r_c=1.0)
    with pytest.raises(ValueError):
        SimConfig(lambda_1d=-1.0)
    cfg = SimConfig(grid_points=256, box_length=64.0)
    with pytest.raises(ValueError, match="dt"):
        evolve(SimConfig(grid_points=256, box_length=64.0, dt=10 * max_stable_dt(cfg)))


def test_free_energy_conserved_without_collapse():
    cfg = SimConfig(grid_points=128, box_length=64.0, r_c=2.0, lambda_1d=0.0,
                    initial_state=GaussianState(p0=0.3, width=2.0), t_end=10.0)
    s = evolve(cfg)
    assert np.max(np.abs(s.energy - s.energy[0])) <= 1e-9
    assert np.max(s.trace_err) <= 1e-10
    assert np.max(np.abs(s.purity - 1.0)) <= 1e-9


def test_harmonic_energy_conserved_without_collapse():
    cfg = SimConfig(grid_points=256, box_length=40.0, r_c=1.0, lambda_1d=0.0, potential=Potential.harmonic(1.0),
                    initial_state=OscillatorState(1, 1.0), t_end=0.1, n_samples=51)
    s = evolve(cfg)
    assert s.energy[0] == pytest.approx(1.5, rel=1e-10)
    assert np.max(np.abs(s.energy - s.energy[0])) <= 1e-9


def test_independence_default():
    rep = run_independence_check()
    assert rep.passed
    for c in rep.cases:
        assert c.relative_error <= 1e-6
        assert c.r_squared >= 0.99
        assert np.max(c.series.trace_err) <= 1e-10
    assert rep.max_pairwise_spread <= 1e-6
    assert rep.to_dict()["passed"] is True


@pytest.mark.parametrize("lam", [0.001, 0.01, 0.1])
def test_rate_scales_with_lambda(lam):
    cfg = SimConfig(grid_points=256, box_length=32.0, r_c=1.0, lambda_1d=lam, t_end=0.2, n_samples=51)
    fit = measure_heating_rate(evolve(cfg))
    assert fit.rate == pytest.approx(analytic_heating_rate(lam, 1.0), rel=1e-6)


@pytest.mark.parametrize("r_c", [0.5, 1.0 * np.sqrt(10) / 2, 5.0])
def test_rate_scales_with_rc(r_c):
    cfg = SimConfig(grid_points=256, box_length=32.0, r_c=r_c, lambda_1d=0.01, t_end=0.2, n_samples=51)
    fit = measure_heating_rate(evolve(cfg))
    assert fit.rate == pytest.approx(analytic_heating_rate(0.01, r_c), rel=1e-6)


def test_grid_refinement():
    coarse = SimConfig(grid_points=256, box_length=64.0, t_end=0.1, n_samples=51)
    fine = SimConfig(grid_points=512, box_length=64.0, t_end=0.1, n_samples=51)
    a, b = (measure_heating_rate(evolve(c)).rate for c in (coarse, fine))
    assert abs(a - b) / b <= 1e-6


def test_purity_non_increasing():
    cfg = SimConfig(grid_points=256, box_length=64.0, lambda_1d=0.5, initial_state=SuperpositionState(8.0, 1.0),
                    t_end=0.5, n_samples=51)
    s = evolve(cfg)
    assert np.all(np.diff(s.purity) <= 1e-12)
    assert s.purity[-1] < s.purity[0]


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")
def test_backends_agree():
    cfg = SimConfig(grid_points=128, box_length=32.0, t_end=0.2, n_samples=51)
    a, b = evolve(cfg, backend="cython"), evolve(cfg, backend="numpy")
    assert a.backend == "cython" and b.backend == "numpy"
    np.testing.assert_allclose(a.energy, b.energy, rtol=1e-12, atol=1e-14)


def test_fallback_kernels_match_direct_formula():
    kern = get_backend("numpy")
    rng = np.random.default_rng(0)
    n = 16
    rho = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = np.ascontiguousarray(rho + rho.conj().T)
    a = np.ascontiguousarray(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    dv = np.ascontiguousarray(rng.normal(size=(n, n)))
    gamma = np.ascontiguousarray(np.abs(rng.normal(size=(n, n))))
    out = np.empty_like(rho)
    kern.liouvillian_rhs(a, rho, dv, gamma, out)
    # -i[H, rho] = -i(T rho - rho T) - i dV rho - Gamma rho, with rho T = a and T rho = a^dagger
    expected = -1j * (a.conj().T - a) - 1j * dv * rho - gamma * rho
    np.testing.assert_allclose(out, expected, rtol=1e-14, atol=1e-14)
    assert kern.hermiticity_error(rho) == 0.0
    with pytest.raises(ValueError):
        get_backend("fortran")


def test_edge_guard():
    # a packet drifting into the periodic boundary
    cfg = SimConfig(grid_points=128, box_length=64.0, r_c=2.0, initial_state=GaussianState(x0=16.0, p0=1.0, width=2.0),
                    t_end=8.0, n_samples=41)
    with pytest.raises(SimulationError, match="boundary"):
        evolve(cfg)


def test_band_limit_guard():
    cfg = SimConfig(grid_points=256, box_length=64.0, initial_state=GaussianState(width=0.1), t_end=0.1)
    with pytest.raises(SimulationError, match="momentum"):
        evolve(cfg)


def test_measure_heating_rate():
    t = np.linspace(0, 2, 60)
    fit = measure_heating_rate((t, 0.5 + 0.125 * t))
    assert fit.rate == pytest.approx(0.125, rel=1e-12) and fit.linear
    assert measure_heating_rate((t, np.full_like(t, 2.0))).r_squared == 1.0
    with pytest.raises(ValueError, match="50"):
        measure_heating_rate((t[:40], t[:40]))
    with pytest.warns(RuntimeWarning, match="not linear"):
        assert not measure_heating_rate((t, np.sin(8 * t))).linear


def test_csv_dump(tmp_path):
    s = evolve(SimConfig(grid_points=128, box_length=32.0, t_end=0.05, n_samples=11))
    s.to_csv(tmp_path / "e.csv")
    lines = (tmp_path / "e.csv").read_text().splitlines()
    assert lines[0] == "t,energy,trace_err,purity" and len(lines) == 12


def test_unit_helpers():
    assert per_dimension_to_3d(2.0) == 6.0
    energy, t = energy_scale_si(1.67e-27, 1e-7)
    assert energy * t == pytest.approx(1.054571817e-34, rel=1e-14)
