import time

import numpy as np
import pytest

from analysis.throughput import (
    AssociationPattern,
    PowerAllocation,
    all_rates,
    link_statistics,
    mrc_detectors,
    rate_from_sinr,
    sinr_closed_form,
    sinr_closed_form_batch,
    signal_term,
    sinr_monte_carlo,
)
from channel.estimation import ChannelEstimate, estimation_statistics
from conftest import make_config, make_scenario, manual_scenario
from models.errors import InvalidParameterError
from models.results import EvaluationMethod
from models.settings import RadioConstants, RadioSettings
from scenario_io.streams import seeded_stream


def _pattern(alpha, alpha_tilde):
    return AssociationPattern(alpha=np.array(alpha), alpha_tilde=np.array(alpha_tilde))


class TestRateFromSinr:
    def test_zero_sinr(self):
        constants = RadioSettings(num_users=4).to_constants(4e5)
        assert rate_from_sinr(0.0, constants) == 0.0

    def test_reference_value(self):
        constants = RadioSettings(num_users=100, bandwidth_mhz=100, tau_c=10000).to_constants(4e5)
        assert rate_from_sinr(1.0, constants) == pytest.approx(99.0)

    def test_linear_in_bandwidth(self):
        narrow = RadioSettings(num_users=3, bandwidth_mhz=50).to_constants(4e5)
        wide = RadioSettings(num_users=3, bandwidth_mhz=100).to_constants(4e5)
        assert rate_from_sinr(3.7, wide) == pytest.approx(2 * rate_from_sinr(3.7, narrow))

    def test_rejects_short_coherence_block(self):
        constants = RadioConstants.model_construct(coherence_symbols=5, num_users=5, bandwidth_hz=1e8)
        with pytest.raises(InvalidParameterError):
            rate_from_sinr(1.0, constants)


class TestClosedForm:
    def test_unserved_user_has_zero_sinr(self, validation_scenario):
        assoc = _pattern([1, 0, 1], [1, 0, 0])
        assert sinr_closed_form(validation_scenario, None, assoc, PowerAllocation.full(validation_scenario.constants), 1) == 0.0

    def test_single_ap_single_user_reduction(self):
        scenario = manual_scenario([[3e-12]], [1e-13])
        constants = scenario.constants
        p = constants.data_power_max_w[0]
        varrho = estimation_statistics(scenario).varrho[0, 0]
        expected = p * varrho / (p * 3e-12 + constants.noise_var_ap_w)
        sinr = sinr_closed_form(scenario, None, _pattern([1], [0]), PowerAllocation.full(constants), 0)
        assert sinr == pytest.approx(expected, rel=1e-12)

    def test_per_user_matches_batch(self, validation_scenario):
        assoc = _pattern([1, 1, 0], [0, 1, 1])
        powers = PowerAllocation(xi=np.array([0.3, 1.0, 0.7]), p_max=np.full(3, 100.0))
        batch = sinr_closed_form_batch(
            link_statistics(validation_scenario), assoc.alpha, assoc.alpha_tilde, powers.powers
        )
        for k in range(3):
            assert sinr_closed_form(validation_scenario, None, assoc, powers, k) == pytest.approx(batch[k])

    def test_link_terms_are_non_negative(self, validation_scenario):
        stats = link_statistics(validation_scenario)
        assert np.all(stats.sat_signal > 0)
        assert np.all(stats.ap_signal > 0)
        assert np.all(stats.sat_interference >= 0)
        assert np.all(stats.ap_interference >= 0)

    def test_enabling_a_flag_raises_the_users_signal_term(self, validation_scenario):
        stats = link_statistics(validation_scenario)
        p = np.asarray(validation_scenario.constants.data_power_max_w)

        def numerator(alpha, alpha_tilde):
            return signal_term(stats, alpha, alpha_tilde, p)

        for index in range(2 ** 6):
            bits = np.array([(index >> (5 - b)) & 1 for b in range(6)], dtype=float)
            alpha, alpha_tilde = bits[0::2], bits[1::2]
            before = numerator(alpha, alpha_tilde)
            for k in range(3):
                if alpha[k] == 0:
                    raised = alpha.copy()
                    raised[k] = 1
                    after = numerator(raised, alpha_tilde)
                    assert after[k] > before[k]
                    np.testing.assert_array_equal(np.delete(after, k), np.delete(before, k))
                if alpha_tilde[k] == 0:
                    raised = alpha_tilde.copy()
                    raised[k] = 1
                    after = numerator(alpha, raised)
                    assert after[k] > before[k]
                    np.testing.assert_array_equal(np.delete(after, k), np.delete(before, k))

    def test_sinr_nondecreasing_in_common_power_scale(self, validation_scenario):
        stats = link_statistics(validation_scenario)
        alpha = np.array([1, 0, 1])
        alpha_tilde = np.array([1, 1, 0])
        base = np.array([30.0, 60.0, 100.0])
        scales = np.logspace(-4, 1, 12)
        sinr = np.array([sinr_closed_form_batch(stats, alpha, alpha_tilde, c * base) for c in scales])
        assert np.all(np.diff(sinr, axis=0) >= -1e-12 * sinr[1:])

    def test_closed_form_is_deterministic(self, validation_scenario):
        assoc = AssociationPattern.full(3)
        first = all_rates(validation_scenario, assoc)
        second = all_rates(validation_scenario, assoc)
        assert first == second
        assert first.method == EvaluationMethod.CLOSED_FORM
        assert first.mc_realizations == 0

    def test_report_rate_identity(self, validation_scenario):
        report = all_rates(validation_scenario, _pattern([1, 0, 1], [0, 1, 1]))
        expected = rate_from_sinr(np.array(report.sinr), validation_scenario.constants)
        np.testing.assert_allclose(report.rate_mbps, expected)

    def test_rejects_mismatched_association(self, validation_scenario):
        with pytest.raises(InvalidParameterError):
            all_rates(validation_scenario, AssociationPattern.full(5))

    def test_association_rejects_non_binary_flags(self):
        with pytest.raises(InvalidParameterError):
            _pattern([1, 2], [0, 1])

    def test_power_allocation_bounds(self):
        with pytest.raises(InvalidParameterError):
            PowerAllocation(xi=np.array([1.2]), p_max=np.array([1.0]))


class TestMonteCarlo:
    def test_detectors_are_the_estimates(self):
        estimate = ChannelEstimate(
            g_hat=np.arange(6).reshape(2, 3) + 0j,
            h_hat=np.zeros((2, 4), dtype=complex),
            varrho=np.ones((2, 3)),
            psi=np.zeros((2, 4, 4)),
        )
        detectors = mrc_detectors(estimate)
        np.testing.assert_array_equal(detectors.w_ap, estimate.g_hat)
        np.testing.assert_array_equal(detectors.w_sat, 0)

    def test_unserved_user_is_exactly_zero(self, validation_scenario):
        assoc = _pattern([1, 0, 1], [1, 0, 1])
        sinr, _ = sinr_monte_carlo(
            validation_scenario, assoc, PowerAllocation.full(validation_scenario.constants), 2000, seeded_stream(1, "mc")
        )
        assert sinr[1] == 0.0
        assert np.all(sinr[[0, 2]] > 0)

    def test_small_sample_diagnostic(self, validation_scenario):
        report = all_rates(
            validation_scenario,
            AssociationPattern.full(3),
            method=EvaluationMethod.MONTE_CARLO,
            n_real=200,
            rng=seeded_stream(1, "mc"),
        )
        assert report.diagnostics
        assert report.mc_realizations == 200

    def test_seed_deterministic(self, validation_scenario):
        assoc = AssociationPattern.full(3)
        powers = PowerAllocation.full(validation_scenario.constants)
        a, _ = sinr_monte_carlo(validation_scenario, assoc, powers, 3000, seeded_stream(5, "mc"), batch_size=1000)
        b, _ = sinr_monte_carlo(validation_scenario, assoc, powers, 3000, seeded_stream(5, "mc"), batch_size=1000)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("pattern", [([1, 1, 1], [1, 1, 1]), ([1, 0, 1], [0, 1, 1])])
    def test_agrees_with_closed_form(self, validation_scenario, pattern):
        assoc = _pattern(*pattern)
        powers = PowerAllocation.full(validation_scenario.constants)
        closed = sinr_closed_form_batch(
            link_statistics(validation_scenario), assoc.alpha, assoc.alpha_tilde, powers.powers
        )
        sampled, _ = sinr_monte_carlo(validation_scenario, assoc, powers, 50_000, seeded_stream(11, "mc"))
        np.testing.assert_allclose(sampled, closed, rtol=0.02)

    @pytest.mark.slow
    def test_agrees_with_closed_form_across_scenarios(self):
        rng = np.random.default_rng(2024)
        for seed in range(10):
            k = int(rng.integers(1, 5))
            config = make_config(
                radio__num_users=k,
                radio__num_aps=int(rng.integers(1, 6)),
                radio__num_sat_antennas=int(rng.integers(1, 9)),
            )
            scenario = make_scenario(config, seed=seed)
            bits = rng.integers(0, 2, size=(2, k))
            bits[:, 0] = 1
            assoc = _pattern(bits[0], bits[1])
            powers = PowerAllocation(xi=rng.uniform(0.2, 1.0, k), p_max=np.full(k, 100.0))
            closed = sinr_closed_form_batch(link_statistics(scenario), assoc.alpha, assoc.alpha_tilde, powers.powers)
            sampled, _ = sinr_monte_carlo(scenario, assoc, powers, 50_000, seeded_stream(seed, "mc"))
            served = assoc.served
            np.testing.assert_allclose(sampled[served], closed[served], rtol=0.02)
            assert np.all(sampled[~served] == 0)


@pytest.mark.slow
def test_large_network_closed_form_is_fast():
    config = make_config(radio__num_users=70, radio__num_aps=50, radio__num_sat_antennas=100)
    scenario = make_scenario(config)
    start = time.perf_counter()
    report = all_rates(scenario, AssociationPattern.full(70))
    assert time.perf_counter() - start < 1.0
    assert len(report.rate_mbps) == 70
