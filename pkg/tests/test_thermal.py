import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from collapseheat.constants import CODATA
from collapseheat.thermal import (
    DEFAULT_STAR,
    AreaModel,
    StarModel,
    equilibrium_temperature,
    load_star,
    max_heating_power,
    radiated_power,
)

# Frozen from direct evaluation of eps * 4 pi R^2 * sigma * T^4 (R = 10 km, CODATA sigma).
P_RAD_280KK = 4.3797940970411285e23
P_RAD_5K = 44535.013253766425
T_EQ_GRW = 914.3216447598851
T_EQ_DP_1E7 = 10.393165698332789


def test_default_star():
    assert DEFAULT_STAR.n_baryons == 1e57
    assert DEFAULT_STAR.area == pytest.approx(4 * math.pi * 1e8)
    assert DEFAULT_STAR.area_model is AreaModel.FULL_SPHERE


def test_star_defaults_baryons_from_mass():
    s = StarModel("x", mass=2.0e30, radius=1e4)
    assert s.n_baryons == pytest.approx(2.0e30 / CODATA.m_neutron, rel=1e-12)


@pytest.mark.parametrize("kwargs", [dict(mass=0, radius=1), dict(mass=1, radius=-1),
                                    dict(mass=1, radius=1, emissivity=0), dict(mass=1, radius=1, emissivity=1.5)])
def test_star_invariants(kwargs):
    with pytest.raises(ValueError):
        StarModel("bad", **kwargs)


def test_disk_area():
    assert DEFAULT_STAR.with_area("disk").area == pytest.approx(math.pi * 1e8)


def test_radiated_power_examples():
    assert radiated_power(DEFAULT_STAR, 0.0) == 0.0
    assert radiated_power(DEFAULT_STAR, 2.8e5) == pytest.approx(P_RAD_280KK, rel=1e-12)
    assert radiated_power(DEFAULT_STAR, 2 * 2.8e5) / P_RAD_280KK == pytest.approx(16.0, rel=1e-14)
    with pytest.raises(ValueError):
        radiated_power(DEFAULT_STAR, -1.0)


def test_equilibrium_temperature_examples():
    assert equilibrium_temperature(DEFAULT_STAR, 4.979865032271931e13) == pytest.approx(T_EQ_GRW, rel=1e-12)
    assert radiated_power(DEFAULT_STAR, T_EQ_GRW) == pytest.approx(4.979865032271931e13, rel=1e-12)
    t_dp = equilibrium_temperature(DEFAULT_STAR, 8.314056542884528e5)
    assert t_dp == pytest.approx(T_EQ_DP_1E7, rel=1e-12)
    assert 1 < t_dp < 100  # "a few Kelvin" scale
    assert equilibrium_temperature(DEFAULT_STAR, 0.0) == 0.0
    with pytest.raises(ValueError):
        equilibrium_temperature(DEFAULT_STAR, -1.0)


def test_max_heating_power():
    assert max_heating_power(DEFAULT_STAR, 2.8e5) == pytest.approx(P_RAD_280KK, rel=1e-12)
    assert max_heating_power(DEFAULT_STAR, 5.0) == pytest.approx(P_RAD_5K, rel=1e-12)
    with pytest.raises(ValueError):
        max_heating_power(DEFAULT_STAR, 0.0)


@given(st.floats(min_value=-3, max_value=30))
def test_round_trip(log_p):
    p = 10.0**log_p
    assert max_heating_power(DEFAULT_STAR, equilibrium_temperature(DEFAULT_STAR, p)) == pytest.approx(p, rel=1e-12)


def test_monotone():
    temps = np.logspace(0, 7, 50)
    powers = [max_heating_power(DEFAULT_STAR, t) for t in temps]
    assert np.all(np.diff(powers) > 0)
    back = [equilibrium_temperature(DEFAULT_STAR, p) for p in powers]
    assert np.all(np.diff(back) > 0)


@given(st.floats(min_value=1e-3, max_value=1e30))
def test_disk_is_sqrt2_hotter(p):
    disk = DEFAULT_STAR.with_area("disk")
    assert equilibrium_temperature(disk, p) / equilibrium_temperature(DEFAULT_STAR, p) == pytest.approx(
        math.sqrt(2), rel=1e-13)


def test_emissivity_raises_temperature():
    grey = StarModel("grey", 2e30, 1e4, 1e57, emissivity=0.5)
    assert equilibrium_temperature(grey, 1e20) > equilibrium_temperature(DEFAULT_STAR, 1e20)


def test_star_json_round_trip(tmp_path):
    path = tmp_path / "star.json"
    path.write_text(json.dumps({"name": "s", "mass_kg": 2.8e30, "radius_m": 1.2e4, "area_model": "disk"}))
    s = load_star(path)
    assert s.area_model is AreaModel.DISK and s.emissivity == 1.0
    assert StarModel.from_dict(s.to_dict()) == s
    assert load_star("default") is DEFAULT_STAR
    with pytest.raises(ValueError):
        StarModel.from_dict({"mass_kg": 1.0})
    with pytest.raises(ValueError):
        StarModel.from_dict({"mass_kg": 1.0, "radius_m": 1.0, "colour": "red"})
