"""
Hybrid genetic algorithm: joint association and power control

The binary part evolves exactly as in the binary GA; each genome also
carries K normalized powers recombined with bounded SBX and perturbed by
polynomial mutation.
"""
import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from analysis.fairness import FitnessEvaluator, Genome
from channel.geometry import NetworkScenario
from models.settings import HgaConfig, UtilityKind
from optimizers.base import SearchResult
from optimizers.bcga import BinaryGeneticOptimizer
from optimizers.operators import polynomial_mutation, sbx_crossover
from optimizers.population import GenomeConstraint, Population

logger = logging.getLogger(__name__)


class HybridGeneticOptimizer(BinaryGeneticOptimizer):
    """Binary GA extended with a real-coded power segment"""

    hybrid = True

    def __init__(
        self,
        evaluator: FitnessEvaluator,
        config: HgaConfig,
        constraint: Optional[GenomeConstraint] = None,
        seeds: Sequence[Genome] = (),
    ):
        super().__init__(evaluator, config, constraint=constraint, seeds=seeds, stream_label="hga")
        self.real_rate = (
            1.0 / self.num_users if config.real_mutation_rate is None else config.real_mutation_rate
        )

    def pair_count(self) -> int:
        if self.config.literal_counts:
            return self.config.literal_pair_count // 2
        return super().pair_count()

    def mutant_count(self) -> int:
        if self.config.literal_counts:
            return self.config.literal_mutant_count
        return super().mutant_count()

    def initial_population(self) -> Population:
        population = super().initial_population()
        if self.config.freeze_power:
            population.xi = np.ones_like(population.xi)
        return population

    def recombine_real(self, xi1: np.ndarray, xi2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if self.config.freeze_power:
            return xi1.copy(), xi2.copy()
        return sbx_crossover(xi1, xi2, self.config.sbx_eta, self.rng)

    def mutate_real(self, xi: np.ndarray) -> np.ndarray:
        if self.config.freeze_power:
            return xi.copy()
        return polynomial_mutation(xi, self.config.polymut_eta, self.rng, rate=self.real_rate)

    def newcomer_real(self) -> np.ndarray:
        if self.config.freeze_power:
            return np.ones(self.num_users)
        return self.rng.random(self.num_users)


def run_hga(
    scenario: NetworkScenario,
    kind: Union[UtilityKind, str],
    config: HgaConfig,
    seeds: Sequence[Genome] = (),
    constraint: Optional[GenomeConstraint] = None,
) -> SearchResult:
    """Joint association/power search

    Seed genomes (e.g. the binary GA's best at full power) enter the initial
    population, so the result is never worse than theirs.
    """
    evaluator = FitnessEvaluator(scenario, kind)
    optimizer = HybridGeneticOptimizer(evaluator, config, constraint=constraint, seeds=seeds)
    return optimizer.run()
