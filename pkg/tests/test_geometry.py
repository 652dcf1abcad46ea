import math

import numpy as np
import pytest

from channel.geometry import (
    beam_pattern_gain,
    build_los_vector,
    build_spatial_correlation,
    generate_scenario,
    psd_square_root,
    sample_channels,
    satellite_pathloss_db,
    slant_range,
    terrestrial_pathloss_db,
)
from conftest import make_config, make_scenario, manual_scenario
from models.errors import InvalidParameterError
from scenario_io.streams import seeded_stream


class TestPathLoss:
    def test_terrestrial_reference_value(self):
        value = terrestrial_pathloss_db(10, 10, 20e9, 1000.0)
        assert value == pytest.approx(-130.41, abs=0.01)

    def test_terrestrial_shadowing_is_additive(self):
        base = terrestrial_pathloss_db(10, 10, 20e9, 1000.0)
        assert terrestrial_pathloss_db(10, 10, 20e9, 1000.0, 7.0) == pytest.approx(base + 7.0)

    def test_terrestrial_clamps_short_distances(self):
        assert terrestrial_pathloss_db(10, 10, 20e9, 0.2) == terrestrial_pathloss_db(10, 10, 20e9, 1.0)

    def test_terrestrial_rejects_non_positive_distance(self):
        with pytest.raises(InvalidParameterError):
            terrestrial_pathloss_db(10, 10, 20e9, np.array([10.0, 0.0]))

    def test_satellite_boresight_value(self):
        value = satellite_pathloss_db(26.9, 10, 0.0, 20e9, 4e5)
        assert value == pytest.approx(-133.61, abs=0.01)

    def test_satellite_shadow_and_distance_laws(self):
        base = satellite_pathloss_db(26.9, 10, 0.0, 20e9, 4e5)
        assert satellite_pathloss_db(26.9, 10, 0.0, 20e9, 4e5, -3.0) == pytest.approx(base - 3.0)
        assert base - satellite_pathloss_db(26.9, 10, 0.0, 20e9, 8e5) == pytest.approx(20 * math.log10(2))


class TestBeamPattern:
    def test_boresight_gain_is_one(self):
        assert beam_pattern_gain(0.0, 0.2, 0.015) == 1.0

    def test_gain_bounded(self):
        angles = np.linspace(0.0, 0.2, 500)
        gains = beam_pattern_gain(angles, 0.2, 0.015)
        assert np.all(gains <= 1.0 + 1e-12)
        assert np.all(gains >= 0.0)

    def test_first_null(self):
        wavelength, radius = 0.015, 0.2
        angle = math.asin(3.8317059702 * wavelength / (2 * math.pi * radius))
        assert beam_pattern_gain(angle, radius, wavelength) < 1e-10

    def test_rejects_angle_outside_range(self):
        with pytest.raises(InvalidParameterError):
            beam_pattern_gain(-0.1, 0.2, 0.015)


class TestSlantRange:
    def test_zenith_equals_altitude(self):
        assert slant_range(math.pi / 2, 4e5, 6.371e6) == pytest.approx(4e5)

    def test_thirty_degrees(self):
        assert slant_range(math.radians(30), 4e5, 6.371e6) / 1e3 == pytest.approx(739.3, abs=0.1)

    def test_rejects_zero_elevation(self):
        with pytest.raises(InvalidParameterError):
            slant_range(0.0, 4e5, 6.371e6)


class TestSatelliteArray:
    def test_pure_los_has_no_scatter(self):
        corr = build_spatial_correlation(1e-13, 0.3, 8, math.inf, 0.5)
        assert np.all(corr == 0)

    def test_uncorrelated_limit_is_scaled_identity(self):
        corr = build_spatial_correlation(2.0, 0.3, 5, 1.0, 0.0)
        np.testing.assert_allclose(corr, np.eye(5), atol=1e-15)

    def test_correlation_is_psd(self):
        corr = build_spatial_correlation(1e-13, -0.7, 16, 10.0, 0.9)
        eigvals = np.linalg.eigvalsh(corr)
        assert eigvals.min() >= -1e-12 * np.trace(corr).real

    def test_rayleigh_has_zero_mean(self):
        assert np.all(build_los_vector(1e-13, 0.2, 8, 0.0) == 0)

    def test_power_split_identity(self):
        beta, m, kappa = 3e-14, 12, 10.0
        los = build_los_vector(beta, 0.4, m, kappa)
        corr = build_spatial_correlation(beta, 0.4, m, kappa, 0.5)
        total = np.sum(np.abs(los) ** 2) + np.trace(corr).real
        assert total == pytest.approx(beta * m, rel=1e-10)

    def test_single_antenna_pure_los(self):
        los = build_los_vector(5.0, 0.1, 1, math.inf)
        assert abs(los[0]) ** 2 == pytest.approx(5.0)

    def test_square_root_reconstructs_matrix(self):
        corr = build_spatial_correlation(1.0, 0.25, 6, 1.0, 0.7)
        root = psd_square_root(corr)
        np.testing.assert_allclose(root @ root, corr, atol=1e-12)


class TestScenario:
    def test_same_seed_same_scenario(self, validation_config):
        a = make_scenario(validation_config, seed=3)
        b = make_scenario(validation_config, seed=3)
        np.testing.assert_array_equal(a.beta_terrestrial, b.beta_terrestrial)
        np.testing.assert_array_equal(a.correlation, b.correlation)

    def test_shapes(self):
        config = make_config(radio__num_users=7, radio__num_aps=5, radio__num_sat_antennas=6)
        scenario = make_scenario(config)
        assert scenario.beta_terrestrial.shape == (7, 5)
        assert scenario.los_vectors.shape == (7, 6)
        assert scenario.correlation.shape == (7, 6, 6)

    def test_satellite_position_stored(self, validation_scenario):
        np.testing.assert_allclose(validation_scenario.sat_position, [3e5, 3.5e5, 4e5])

    def test_users_inside_area(self):
        config = make_config(radio__num_users=30, area__x_km=2.0, area__y_km=1.0)
        scenario = generate_scenario(config, seeded_stream(1, "scenario"))
        xy = scenario.user_positions[:, :2]
        assert np.all(xy >= 0)
        assert np.all(xy[:, 0] <= 2000.0) and np.all(xy[:, 1] <= 1000.0)
        assert np.all(scenario.user_positions[:, 2] == 1.5)

    def test_gains_positive(self, validation_scenario):
        assert np.all(validation_scenario.beta_terrestrial > 0)
        assert np.all(validation_scenario.beta_sat > 0)

    def test_terrestrial_shadowing_spread(self):
        config = make_config(radio__num_users=250, radio__num_aps=400, radio__num_sat_antennas=1)
        scenario = make_scenario(config, seed=11)
        constants = scenario.constants
        distances = np.linalg.norm(
            scenario.user_positions[:, None, :] - scenario.ap_positions[None, :, :], axis=-1
        )
        mean_db = terrestrial_pathloss_db(
            constants.ap_antenna_gain_dbi, constants.user_antenna_gain_dbi, constants.carrier_hz, distances
        )
        shadow = 10.0 * np.log10(scenario.beta_terrestrial) - mean_db
        assert shadow.size == 100_000
        assert np.std(shadow) == pytest.approx(7.0, rel=0.02)
        assert abs(np.mean(shadow)) < 0.1


class TestChannelSampling:
    def test_terrestrial_variance(self, rng):
        scenario = manual_scenario([[2.0, 0.5]], [1.0])
        draws = sample_channels(scenario, rng, size=100_000)
        power = np.mean(np.abs(draws.g) ** 2, axis=0)
        np.testing.assert_allclose(power, scenario.beta_terrestrial, rtol=0.02)

    def test_satellite_mean(self, rng):
        scenario = manual_scenario([[1.0]], [1.0], num_sat_antennas=4)
        draws = sample_channels(scenario, rng, size=20_000)
        mean = draws.h.mean(axis=0)
        sigma = np.sqrt(np.real(np.diagonal(scenario.correlation[0])) / 20_000)
        assert np.all(np.abs(mean[0] - scenario.los_vectors[0]) < 4 * sigma)

    def test_no_scatter_gives_deterministic_channel(self, rng):
        scenario = manual_scenario([[1.0]], [1.0], num_sat_antennas=3, rician_factor=math.inf)
        draws = sample_channels(scenario, rng, size=5)
        np.testing.assert_allclose(draws.h, np.broadcast_to(scenario.los_vectors, draws.h.shape))

    def test_single_draw_shape(self, validation_scenario, rng):
        draw = sample_channels(validation_scenario, rng)
        assert draw.g.shape == (3, 4)
        assert draw.h.shape == (3, 8)
