"""
Binary-coded genetic algorithm for user association

Each generation draws n_c/2 parent pairs, recombines them with a randomly
chosen mask family, flips a few bits of n_m offspring and keeps the Q best
distinct genomes of parents and children. Once the best value has been flat
for `stall_generations`, the n_m mutant slots are filled with fresh random
genomes instead.
"""
import logging
import time
from collections import deque
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from analysis.fairness import FitnessEvaluator, Genome
from channel.geometry import NetworkScenario
from config import Config
from models.results import GenerationRecord
from models.settings import GaConfig, ParentSelection, UtilityKind
from optimizers.base import SearchResult
from optimizers.operators import (
    MASK_KINDS,
    MaskKind,
    bitwise_mutation,
    choose_mask_kind,
    make_mask,
    masked_crossover,
)
from optimizers.population import GenomeConstraint, Population, init_population, survival_select
from scenario_io.streams import seeded_stream

logger = logging.getLogger(__name__)

ADAPTIVE_WINDOW = 10
ADAPTIVE_FLOOR = 0.05


class BinaryGeneticOptimizer:
    """Elitist GA over 2K association bits"""

    hybrid = False

    def __init__(
        self,
        evaluator: FitnessEvaluator,
        config: GaConfig,
        constraint: Optional[GenomeConstraint] = None,
        seeds: Sequence[Genome] = (),
        stream_label: str = "ga",
    ):
        self.evaluator = evaluator
        self.config = config
        self.constraint = constraint
        self.seeds = list(seeds)
        seed = Config.DEFAULT_SEED if config.seed is None else config.seed
        self.rng = seeded_stream(seed, stream_label)
        self.num_users = evaluator.scenario.num_users
        self.genome_length = 2 * self.num_users
        eps1, eps2 = config.mask_probs
        self.mask_probs = np.array([eps1, eps2, max(0.0, 1.0 - eps1 - eps2)])
        self._mask_window = deque(maxlen=ADAPTIVE_WINDOW)

    # -- counts -------------------------------------------------------------

    def pair_count(self) -> int:
        return self.config.offspring_count // 2

    def mutant_count(self) -> int:
        return self.config.mutant_count

    # -- hooks for the real-coded part ---------------------------------------

    def initial_population(self) -> Population:
        return init_population(
            self.config.population_q,
            self.num_users,
            self.rng,
            hybrid=self.hybrid,
            constraint=self.constraint,
            seeds=self.seeds,
        )

    def recombine_real(self, xi1: np.ndarray, xi2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return xi1, xi2

    def mutate_real(self, xi: np.ndarray) -> np.ndarray:
        return xi

    def newcomer_real(self) -> Optional[np.ndarray]:
        return None

    # -- binary machinery ----------------------------------------------------

    def select_parents(self, population: Population) -> Tuple[int, int]:
        """Two distinct parents, uniformly or by binary tournament"""
        q = population.size
        if self.config.parent_selection == ParentSelection.UNIFORM:
            first, second = self.rng.choice(q, size=2, replace=False)
            return int(first), int(second)
        first = self._tournament(population, np.arange(q))
        second = self._tournament(population, np.delete(np.arange(q), first))
        return first, second

    def _tournament(self, population: Population, candidates: np.ndarray) -> int:
        if candidates.size == 1:
            return int(candidates[0])
        a, b = self.rng.choice(candidates, size=2, replace=False)
        return int(a) if population.fitness[a] >= population.fitness[b] else int(b)

    def _choose_mask(self) -> MaskKind:
        probs = self.mask_probs / self.mask_probs.sum()
        return choose_mask_kind(self.rng, probs[:2])

    def _update_mask_probs(self, outcomes: List[Tuple[MaskKind, bool]]) -> None:
        """Shift mask probabilities toward families that produced improving children"""
        self._mask_window.append(outcomes)
        uses = {kind: 0 for kind in MASK_KINDS}
        wins = {kind: 0 for kind in MASK_KINDS}
        for generation in self._mask_window:
            for kind, improved in generation:
                uses[kind] += 1
                wins[kind] += int(improved)
        scores = np.array([(wins[kind] + 1.0) / (uses[kind] + 1.0) for kind in MASK_KINDS])
        probs = np.maximum(scores / scores.sum(), ADAPTIVE_FLOOR)
        self.mask_probs = probs / probs.sum()

    def _evaluate(self, bits: np.ndarray, xi: Optional[np.ndarray]) -> np.ndarray:
        if bits.shape[0] == 0:
            return np.empty(0)
        return self.evaluator.evaluate_batch(bits, xi)

    def _stalled(self, population: Population, generation: int) -> bool:
        """True once the best value has been flat for stall_generations generations"""
        window = self.config.stall_generations
        return window > 0 and (generation - 1) - population.best_generation >= window

    def _breed(self, population: Population, generation: int) -> Tuple[Population, List[Tuple[MaskKind, float]]]:
        """Crossover and mutation for one generation; children are not yet evaluated"""
        child_bits, child_xi, pairs = [], [], []
        for _ in range(self.pair_count()):
            i, j = self.select_parents(population)
            kind = self._choose_mask()
            mask = make_mask(kind, self.genome_length, self.rng)
            c1, c2 = masked_crossover(population.bits[i], population.bits[j], mask)
            child_bits.extend([c1, c2])
            if self.hybrid:
                x1, x2 = self.recombine_real(population.xi[i], population.xi[j])
                child_xi.extend([x1, x2])
            pairs.append((kind, max(population.fitness[i], population.fitness[j])))

        stalled = self._stalled(population, generation)
        source_bits = child_bits if child_bits else list(population.bits)
        source_xi = child_xi if child_xi else (list(population.xi) if self.hybrid else [])
        max_flips = self.config.max_mutate_count(self.genome_length)
        mutant_bits, mutant_xi = [], []
        for _ in range(self.mutant_count()):
            if stalled:
                mutant_bits.append((self.rng.random(self.genome_length) >= 0.5).astype(np.uint8))
                if self.hybrid:
                    mutant_xi.append(self.newcomer_real())
                continue
            src = int(self.rng.integers(len(source_bits)))
            flips = int(self.rng.integers(1, max_flips + 1))
            mutant_bits.append(bitwise_mutation(source_bits[src], self.rng, flips))
            if self.hybrid:
                mutant_xi.append(self.mutate_real(source_xi[src]))

        all_bits = child_bits + mutant_bits
        bits = np.array(all_bits, dtype=np.uint8).reshape(len(all_bits), self.genome_length)
        if self.constraint is not None:
            bits = self.constraint.apply(bits)
        xi = None
        if self.hybrid:
            xi = np.array(child_xi + mutant_xi, dtype=float).reshape(len(all_bits), self.num_users)
        offspring = Population(
            bits=bits,
            fitness=np.empty(bits.shape[0]),
            birth=np.full(bits.shape[0], generation, dtype=np.int64),
            xi=xi,
            generation=generation,
        )
        return offspring, pairs

    def _record(self, population: Population, generation: int, evaluations: int) -> GenerationRecord:
        return GenerationRecord(
            generation=generation,
            best_fitness=float(population.best_value),
            mean_fitness=float(np.mean(population.fitness)),
            evals_cum=evaluations,
        )

    def run(self, target_value: Optional[float] = None) -> SearchResult:
        """Evolve for max_generations, or until target_value is reached"""
        start = time.perf_counter()
        evals_start = self.evaluator.evaluations
        q = self.config.population_q

        population = self.initial_population()
        population.fitness = self._evaluate(population.bits, population.xi)
        population.refresh_best()
        history = [self._record(population, 0, self.evaluator.evaluations - evals_start)]

        for generation in range(1, self.config.max_generations + 1):
            if target_value is not None and population.best_value >= target_value:
                break
            offspring, pairs = self._breed(population, generation)
            offspring.fitness = self._evaluate(offspring.bits, offspring.xi)
            if self.config.adaptive_masks and pairs:
                outcomes = [
                    (kind, max(offspring.fitness[2 * n], offspring.fitness[2 * n + 1]) > parent_best)
                    for n, (kind, parent_best) in enumerate(pairs)
                ]
                self._update_mask_probs(outcomes)
            population = survival_select(population, offspring, q)
            history.append(self._record(population, generation, self.evaluator.evaluations - evals_start))
            logger.debug(f"generation {generation}: best {population.best_value:.6g}")

        elapsed = time.perf_counter() - start
        logger.info(
            f"{type(self).__name__} finished: best {population.best_value:.6g} "
            f"found at generation {population.best_generation} ({elapsed:.2f}s)"
        )
        return SearchResult(
            best_genome=population.best_genome(),
            best_value=population.best_value,
            evaluations=self.evaluator.evaluations - evals_start,
            wall_time_s=elapsed,
            generation_found=population.best_generation,
            history=history,
        )


def run_bcga(
    scenario: NetworkScenario,
    kind: Union[UtilityKind, str],
    config: GaConfig,
    constraint: Optional[GenomeConstraint] = None,
    target_value: Optional[float] = None,
    seeds: Sequence[Genome] = (),
) -> SearchResult:
    """Binary GA search for the association maximizing the utility"""
    evaluator = FitnessEvaluator(scenario, kind)
    optimizer = BinaryGeneticOptimizer(evaluator, config, constraint=constraint, seeds=seeds)
    return optimizer.run(target_value=target_value)
