import math

import numpy as np
import pytest

from channel.estimation import (
    check_pilot_book,
    estimate_channels,
    estimation_statistics,
    estimation_variance,
    mmse_estimate_satellite,
    mmse_estimate_terrestrial,
    psi_matrix,
    receive_pilots,
)
from channel.geometry import ChannelRealization, sample_channels
from conftest import manual_scenario
from models.errors import InvalidParameterError


def _unit_noise_scenario(**kwargs):
    """Gains for which the pilot SNR pK beta / sigma^2 is moderate (tens to hundreds)"""
    return manual_scenario(
        kwargs.pop("beta_terrestrial", [[2e-12, 5e-13], [1e-12, 3e-12]]),
        kwargs.pop("beta_sat", [4e-13, 2e-13]),
        **kwargs,
    )


class TestEstimationVariance:
    def test_zero_power(self):
        assert estimation_variance(1.0, 0.0, 4, 1.0) == 0.0

    def test_half_point(self):
        # pK beta = sigma^2
        assert estimation_variance(2.0, 0.25, 2, 1.0) == pytest.approx(1.0)

    def test_perfect_csi_limit(self):
        assert estimation_variance(3.0, 1e12, 4, 1.0) == pytest.approx(3.0, rel=1e-9)

    def test_bounded_and_monotone(self):
        powers = np.logspace(-3, 3, 25)
        values = np.array([estimation_variance(1.5, p, 3, 0.7) for p in powers])
        assert np.all(values <= 1.5)
        assert np.all(np.diff(values) >= 0)

    def test_rejects_zero_noise(self):
        with pytest.raises(InvalidParameterError):
            estimation_variance(1.0, 1.0, 1, 0.0)


class TestPsi:
    def test_zero_correlation(self):
        np.testing.assert_allclose(psi_matrix(np.zeros((3, 3)), 1.0, 2, 0.5), np.eye(3) / 0.5)

    def test_scalar_case(self):
        np.testing.assert_allclose(psi_matrix(np.eye(4), 1.0, 1, 1.0), np.eye(4) / 2)

    def test_residual(self, rng):
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        r = a @ a.conj().T
        psi = psi_matrix(r, 0.3, 5, 0.2)
        np.testing.assert_allclose((1.5 * r + 0.2 * np.eye(6)) @ psi, np.eye(6), atol=1e-10)
        np.testing.assert_allclose(psi, psi.conj().T)

    def test_rejects_zero_noise(self):
        with pytest.raises(InvalidParameterError):
            psi_matrix(np.eye(2), 1.0, 1, 0.0)


class TestPilotPhase:
    def test_projection_isolates_each_user(self, rng):
        scenario = _unit_noise_scenario()
        channels = sample_channels(scenario, rng)
        observation = receive_pilots(scenario, channels, rng)
        amplitude = math.sqrt(scenario.constants.pilot_power_w * 2)
        projected = (observation.y_ap @ observation.pilot_book).T
        noise_std = math.sqrt(scenario.constants.noise_var_ap_w)
        assert np.all(np.abs(projected - amplitude * channels.g) < 8 * noise_std)

    def test_projection_noise_variance(self, rng):
        scenario = _unit_noise_scenario(num_sat_antennas=3)
        channels = sample_channels(scenario, rng, size=10_000)
        observation = receive_pilots(scenario, channels, rng)
        amplitude = math.sqrt(scenario.constants.pilot_power_w * 2)
        projected = np.swapaxes(observation.y_sat @ observation.pilot_book, -1, -2)
        error = np.sum(np.abs(projected[:, 0] - amplitude * channels.h[:, 0]) ** 2, axis=-1)
        expected = 3 * scenario.constants.noise_var_sat_w
        assert error.mean() == pytest.approx(expected, rel=0.03)

    def test_zero_pilot_power_is_pure_noise(self, rng):
        scenario = _unit_noise_scenario(pilot_power_dbw=-400.0)
        channels = sample_channels(scenario, rng, size=20_000)
        observation = receive_pilots(scenario, channels, rng)
        variance = np.mean(np.abs(observation.y_ap) ** 2)
        assert variance == pytest.approx(scenario.constants.noise_var_ap_w, rel=0.02)

    def test_rejects_non_orthonormal_book(self):
        with pytest.raises(InvalidParameterError):
            check_pilot_book(np.ones((2, 2)), 2)

    def test_accepts_rotated_book(self, rng):
        scenario = _unit_noise_scenario()
        book = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        channels = ChannelRealization(
            g=np.ones((2, 2), dtype=complex), h=np.ones((2, 2), dtype=complex)
        )
        observation = receive_pilots(scenario, channels, rng, pilot_book=book)
        assert observation.y_ap.shape == (2, 2)


class TestMmseEstimates:
    def test_terrestrial_statistics(self, rng):
        scenario = _unit_noise_scenario()
        channels = sample_channels(scenario, rng, size=100_000)
        observation = receive_pilots(scenario, channels, rng)
        g_hat = mmse_estimate_terrestrial(observation, scenario)
        stats = estimation_statistics(scenario)
        np.testing.assert_allclose(np.mean(np.abs(g_hat) ** 2, axis=0), stats.varrho, rtol=0.02)
        error = channels.g - g_hat
        np.testing.assert_allclose(
            np.mean(np.abs(error) ** 2, axis=0), scenario.beta_terrestrial - stats.varrho, rtol=0.03
        )
        corr = np.abs(np.mean(g_hat * error.conj(), axis=0)) / np.sqrt(
            np.mean(np.abs(g_hat) ** 2, axis=0) * np.mean(np.abs(error) ** 2, axis=0)
        )
        assert np.all(corr < 0.02)

    def test_satellite_prior_mean_without_pilots(self, rng):
        scenario = _unit_noise_scenario(pilot_power_dbw=-400.0)
        channels = sample_channels(scenario, rng, size=3)
        observation = receive_pilots(scenario, channels, rng)
        h_hat = mmse_estimate_satellite(observation, scenario)
        np.testing.assert_allclose(h_hat, np.broadcast_to(scenario.los_vectors, h_hat.shape), atol=1e-20)

    def test_satellite_estimate_covariance(self, rng):
        scenario = _unit_noise_scenario(num_sat_antennas=3)
        channels = sample_channels(scenario, rng, size=20_000)
        estimate = estimate_channels(scenario, receive_pilots(scenario, channels, rng))
        stats = estimation_statistics(scenario)
        pk = scenario.constants.pilot_power_w * 2
        centered = estimate.h_hat[:, 0] - scenario.los_vectors[0]
        empirical = centered.T @ centered.conj() / centered.shape[0]
        expected = pk * stats.theta[0]
        assert np.linalg.norm(empirical - expected) <= 0.05 * np.linalg.norm(expected)

        error = channels.h[:, 0] - estimate.h_hat[:, 0]
        error = error - error.mean(axis=0)
        empirical_error = error.T @ error.conj() / error.shape[0]
        expected_error = scenario.correlation[0] - expected
        assert np.linalg.norm(empirical_error - expected_error) <= 0.05 * np.linalg.norm(expected_error)

    def test_terrestrial_estimate_is_linear(self, rng):
        scenario = _unit_noise_scenario()
        channels = sample_channels(scenario, rng)
        observation = receive_pilots(scenario, channels, rng)
        scaled = type(observation)(
            y_ap=3.0 * observation.y_ap, y_sat=observation.y_sat, pilot_book=observation.pilot_book
        )
        np.testing.assert_allclose(
            mmse_estimate_terrestrial(scaled, scenario),
            3.0 * mmse_estimate_terrestrial(observation, scenario),
        )

    def test_statistics_bounds(self, validation_scenario):
        stats = estimation_statistics(validation_scenario)
        assert np.all(stats.varrho >= 0)
        assert np.all(stats.varrho <= validation_scenario.beta_terrestrial)
        for psi in stats.psi:
            np.testing.assert_allclose(psi, psi.conj().T)
            assert np.linalg.eigvalsh(psi).min() > 0
