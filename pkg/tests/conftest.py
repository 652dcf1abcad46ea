"""
Shared fixtures: small configs and scenarios built from fixed seeds
"""
import numpy as np
import pytest

from channel.geometry import (
    NetworkScenario,
    build_los_vector,
    build_spatial_correlation,
    generate_scenario,
)
from models.settings import RadioSettings
from scenario_io.config_loader import load_config
from scenario_io.streams import seeded_stream


def make_config(**overrides):
    """SimConfig from dotted keys given with '__' in place of '.'"""
    return load_config("", [f"{key.replace('__', '.')}={value}" for key, value in overrides.items()])


def make_scenario(config, seed=7):
    return generate_scenario(config, seeded_stream(seed, "scenario"))


def manual_scenario(
    beta_terrestrial,
    beta_sat,
    num_sat_antennas=2,
    rician_factor=10.0,
    rho=0.5,
    array_cosines=None,
    **radio,
):
    """Scenario with hand-picked large-scale gains (positions are placeholders)"""
    beta_terrestrial = np.atleast_2d(np.asarray(beta_terrestrial, dtype=float))
    beta_sat = np.atleast_1d(np.asarray(beta_sat, dtype=float))
    k, n = beta_terrestrial.shape
    settings = RadioSettings(num_users=k, num_aps=n, num_sat_antennas=num_sat_antennas, **radio)
    constants = settings.to_constants(sat_altitude_m=4e5)
    cosines = np.linspace(-0.3, 0.4, k) if array_cosines is None else np.asarray(array_cosines)
    los = np.stack([
        build_los_vector(beta_sat[i], cosines[i], num_sat_antennas, rician_factor) for i in range(k)
    ])
    corr = np.stack([
        build_spatial_correlation(beta_sat[i], cosines[i], num_sat_antennas, rician_factor, rho)
        for i in range(k)
    ])
    return NetworkScenario(
        constants=constants,
        ap_positions=np.zeros((n, 3)),
        user_positions=np.zeros((k, 3)),
        sat_position=np.array([0.0, 0.0, 4e5]),
        beta_terrestrial=beta_terrestrial,
        beta_sat=beta_sat,
        los_vectors=los,
        correlation=corr,
        rician_factor=rician_factor,
    )


@pytest.fixture
def validation_config():
    return make_config(radio__num_users=3, radio__num_aps=4, radio__num_sat_antennas=8)


@pytest.fixture
def validation_scenario(validation_config):
    return make_scenario(validation_config)


@pytest.fixture
def small_config():
    return make_config(
        radio__num_users=4,
        radio__num_aps=3,
        radio__num_sat_antennas=8,
        ga__population_q=30,
        ga__max_generations=60,
    )


@pytest.fixture
def small_scenario(small_config):
    return make_scenario(small_config)


@pytest.fixture
def tiny_config():
    return make_config(
        radio__num_users=2,
        radio__num_aps=2,
        radio__num_sat_antennas=4,
        ga__population_q=8,
        ga__max_generations=40,
    )


@pytest.fixture
def tiny_scenario(tiny_config):
    return make_scenario(tiny_config)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
