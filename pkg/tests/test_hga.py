import numpy as np
import pytest

from analysis.fairness import FitnessEvaluator, Genome, fitness
from conftest import make_config, make_scenario
from models.settings import GaConfig, HgaConfig, UtilityKind
from optimizers.bcga import run_bcga
from optimizers.hga import HybridGeneticOptimizer, run_hga


def _config(**overrides):
    values = dict(population_q=30, max_generations=60, seed=5)
    values.update(overrides)
    return HgaConfig(**values)


class TestHgaConfig:
    def test_literal_counts(self):
        config = _config(population_q=8, crossover_rate=0.9, mutation_rate=0.2, sbx_eta=15.0, polymut_eta=20.0)
        assert config.literal_pair_count == 62
        assert config.literal_mutant_count == 80

    def test_from_simulation_config(self):
        config = make_config(ga__population_q=12, hga__sbx_eta=9, run__seed=77).hga_config()
        assert config.population_q == 12
        assert config.sbx_eta == 9.0
        assert config.seed == 77


class TestRunHga:
    def test_powers_stay_in_unit_interval(self, small_scenario):
        result = run_hga(small_scenario, UtilityKind.GEOMETRIC, _config())
        xi = result.best_genome.xi
        assert xi.shape == (4,)
        assert np.all((xi >= 0) & (xi <= 1))

    def test_history_nondecreasing(self, small_scenario):
        history = run_hga(small_scenario, UtilityKind.MAXMIN, _config()).best_history
        assert all(b >= a for a, b in zip(history, history[1:]))

    def test_seed_determinism(self, small_scenario):
        a = run_hga(small_scenario, UtilityKind.ARITHMETIC, _config())
        b = run_hga(small_scenario, UtilityKind.ARITHMETIC, _config())
        assert a.best_history == b.best_history
        np.testing.assert_array_equal(a.best_genome.xi, b.best_genome.xi)

    def test_frozen_power_reduces_to_fixed_power_problem(self, small_scenario):
        result = run_hga(small_scenario, UtilityKind.MAXMIN, _config(freeze_power=True))
        np.testing.assert_array_equal(result.best_genome.xi, 1.0)
        binary = Genome(bits=result.best_genome.bits)
        assert result.best_value == pytest.approx(fitness(binary, small_scenario, "maxmin"), rel=1e-12)

    @pytest.mark.parametrize("kind", list(UtilityKind))
    def test_warm_start_never_loses_to_binary_ga(self, small_scenario, kind):
        baseline = run_bcga(small_scenario, kind, _config())
        seed = Genome(bits=baseline.best_genome.bits, xi=np.ones(4))
        result = run_hga(small_scenario, kind, _config(), seeds=[seed])
        assert result.best_value >= baseline.best_value * (1 - 1e-12)

    def test_literal_count_mode_breeds_more_children(self, small_scenario):
        config = _config(population_q=6, max_generations=1, literal_counts=True)
        optimizer = HybridGeneticOptimizer(FitnessEvaluator(small_scenario, UtilityKind.MAXMIN), config)
        assert optimizer.pair_count() == config.literal_pair_count // 2
        assert optimizer.mutant_count() == config.literal_mutant_count
        result = optimizer.run()
        per_generation = config.literal_pair_count + config.literal_mutant_count
        assert result.evaluations == config.population_q + per_generation

    @pytest.mark.parametrize("num_users", [2, 5])
    def test_default_real_mutation_rate_is_one_over_k(self, num_users):
        scenario = make_scenario(make_config(radio__num_users=num_users, radio__num_aps=2, radio__num_sat_antennas=4))
        optimizer = HybridGeneticOptimizer(FitnessEvaluator(scenario, UtilityKind.MAXMIN), _config())
        assert optimizer.real_rate == pytest.approx(1.0 / num_users)

    def test_explicit_real_mutation_rate(self, small_scenario):
        optimizer = HybridGeneticOptimizer(
            FitnessEvaluator(small_scenario, UtilityKind.MAXMIN), _config(real_mutation_rate=0.6)
        )
        assert optimizer.real_rate == 0.6

    def test_merges_ga_and_hga_sections(self):
        config = make_config(ga__population_q=14, ga__stall_generations=0, run__seed=5, hga__eta_c=9).hga_config()
        assert isinstance(config, GaConfig)
        assert (config.population_q, config.stall_generations, config.seed, config.sbx_eta) == (14, 0, 5, 9)


@pytest.mark.slow
def test_power_control_gain_at_desk_scale():
    scenario = make_scenario(make_config(radio__num_users=15, radio__num_aps=15, radio__num_sat_antennas=16))
    gains = []
    for seed in range(10):
        config = _config(population_q=50, max_generations=300, seed=seed)
        baseline = run_bcga(scenario, UtilityKind.MAXMIN, config)
        warm = Genome(bits=baseline.best_genome.bits, xi=np.ones(15))
        result = run_hga(scenario, UtilityKind.MAXMIN, config, seeds=[warm])
        gains.append(result.best_value / baseline.best_value - 1.0)
    assert np.median(gains) >= 0.05
