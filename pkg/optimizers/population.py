"""
Population container, initialization, constraints and elitist survival
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from analysis.fairness import Genome
from config import CONNECTION_MODES
from models.errors import InvalidParameterError


@dataclass(frozen=True)
class GenomeConstraint:
    """Bits that are allowed to be 1; everything else is forced to 0"""
    allowed: np.ndarray

    def apply(self, bits: np.ndarray) -> np.ndarray:
        return np.asarray(bits, dtype=np.uint8) & self.allowed

    @classmethod
    def from_mode(cls, mode: str, num_users: int) -> "GenomeConstraint":
        if mode not in CONNECTION_MODES:
            raise InvalidParameterError(
                f"unknown connection mode '{mode}'; expected one of {sorted(CONNECTION_MODES)}"
            )
        ap_flag, sat_flag = CONNECTION_MODES[mode]
        return cls(allowed=np.tile(np.array([ap_flag, sat_flag], dtype=np.uint8), num_users))


@dataclass
class Population:
    """Q genomes with fitness, birth generation and the best-so-far record"""
    bits: np.ndarray                      # (Q, 2K) uint8
    fitness: np.ndarray                   # (Q,)
    birth: np.ndarray                     # (Q,) generation that created each member
    xi: Optional[np.ndarray] = None       # (Q, K) for hybrid populations
    generation: int = 0
    best_value: float = -np.inf
    best_bits: Optional[np.ndarray] = None
    best_xi: Optional[np.ndarray] = None
    best_generation: int = 0

    @property
    def size(self) -> int:
        return int(self.bits.shape[0])

    @property
    def is_hybrid(self) -> bool:
        return self.xi is not None

    def best_genome(self) -> Genome:
        xi = None if self.best_xi is None else self.best_xi.copy()
        return Genome(bits=self.best_bits.copy(), xi=xi)

    def refresh_best(self) -> None:
        """Record the current leader when it beats the best-so-far"""
        leader = int(np.argmax(self.fitness))
        if self.best_bits is None or self.fitness[leader] > self.best_value:
            self.best_value = float(self.fitness[leader])
            self.best_bits = self.bits[leader].copy()
            self.best_xi = None if self.xi is None else self.xi[leader].copy()
            self.best_generation = self.generation


def init_population(
    q: int,
    k_users: int,
    rng: np.random.Generator,
    hybrid: bool = False,
    constraint: Optional[GenomeConstraint] = None,
    seeds: Sequence[Genome] = (),
) -> Population:
    """Member 0 is all ones; the rest draw bit = 0 iff u < 0.5

    Hybrid populations start member 0 at full power and the others at
    xi ~ U[0, 1]. Seed genomes replace members 1, 2, ... in order.
    """
    if q < 2:
        raise InvalidParameterError(f"population size must be at least 2, got {q}")
    length = 2 * k_users
    bits = np.ones((q, length), dtype=np.uint8)
    bits[1:] = (rng.random((q - 1, length)) >= 0.5).astype(np.uint8)
    xi = None
    if hybrid:
        xi = np.ones((q, k_users))
        xi[1:] = rng.random((q - 1, k_users))
    for offset, genome in enumerate(list(seeds)[: q - 1], start=1):
        bits[offset] = genome.bits
        if hybrid:
            xi[offset] = np.ones(k_users) if genome.xi is None else genome.xi
    if constraint is not None:
        bits = constraint.apply(bits)
    return Population(
        bits=bits,
        fitness=np.full(q, np.nan),
        birth=np.zeros(q, dtype=np.int64),
        xi=xi,
    )


def _distinct_first(order: np.ndarray, bits: np.ndarray, xi: Optional[np.ndarray]) -> np.ndarray:
    """Reorder so the first copy of every genome precedes all repeats; ranks are kept within each group"""
    keys = bits[order].astype(float)
    if xi is not None:
        keys = np.hstack([keys, xi[order]])
    _, first = np.unique(keys, axis=0, return_index=True)
    is_first = np.zeros(order.size, dtype=bool)
    is_first[first] = True
    return np.concatenate([order[is_first], order[~is_first]])


def survival_select(parents: Population, offspring: Population, q: int, distinct: bool = True) -> Population:
    """Keep the q fittest of parents and offspring

    Ties prefer the older member, then the lower pool index (parents come
    first in the pool). With `distinct`, repeated genomes only fill the
    slots left over once every distinct genome in the pool has a place.
    """
    bits = np.concatenate([parents.bits, offspring.bits])
    fitness = np.concatenate([parents.fitness, offspring.fitness])
    birth = np.concatenate([parents.birth, offspring.birth])
    xi = None
    if parents.xi is not None:
        xi = np.concatenate([parents.xi, offspring.xi])
    pool_index = np.arange(fitness.size)
    order = np.lexsort((pool_index, birth, -fitness))
    if distinct:
        order = _distinct_first(order, bits, xi)
    order = order[:q]

    survivors = Population(
        bits=bits[order],
        fitness=fitness[order],
        birth=birth[order],
        xi=None if xi is None else xi[order],
        generation=max(parents.generation, offspring.generation),
        best_value=parents.best_value,
        best_bits=parents.best_bits,
        best_xi=parents.best_xi,
        best_generation=parents.best_generation,
    )
    survivors.refresh_best()
    return survivors
