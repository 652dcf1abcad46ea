"""
Fairness utilities and the genome-to-fitness pipeline

A genome carries 2K association bits laid out user-major as [AP flag,
satellite flag] pairs, optionally followed by K normalized powers.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from analysis.throughput import (
    AssociationPattern,
    PowerAllocation,
    link_statistics,
    rate_from_sinr,
    sinr_closed_form_batch,
)
from channel.geometry import NetworkScenario
from models.errors import InvalidParameterError
from models.settings import UtilityKind

logger = logging.getLogger(__name__)


def utility(rates, kind: Union[UtilityKind, str]):
    """System utility of a rate vector, or of each row of a (B, K) batch"""
    kind = UtilityKind(kind)
    values = np.asarray(rates, dtype=float)
    if values.size == 0 or values.shape[-1] == 0:
        raise InvalidParameterError("utility of an empty rate vector is undefined")
    if kind == UtilityKind.ARITHMETIC:
        result = values.mean(axis=-1)
    elif kind == UtilityKind.MAXMIN:
        result = values.min(axis=-1)
    else:
        positive = np.all(values > 0, axis=-1)
        safe = np.where(values > 0, values, 1.0)
        result = np.where(positive, np.exp(np.log(safe).mean(axis=-1)), 0.0)
        # keep min <= GM <= AM exact under rounding
        result = np.where(positive, np.clip(result, values.min(axis=-1), values.mean(axis=-1)), 0.0)
    return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class Genome:
    """Association bits plus optional normalized powers (hybrid genomes)"""
    bits: np.ndarray
    xi: Optional[np.ndarray] = None

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or bits.size == 0 or bits.size % 2:
            raise InvalidParameterError(f"genome needs an even, non-zero number of bits, got {bits.size}")
        if not np.all((bits == 0) | (bits == 1)):
            raise InvalidParameterError("genome bits must be 0 or 1")
        object.__setattr__(self, "bits", bits.astype(np.uint8))
        if self.xi is not None:
            xi = np.asarray(self.xi, dtype=float)
            if xi.shape != (bits.size // 2,):
                raise InvalidParameterError(f"hybrid genome needs {bits.size // 2} powers, got {xi.shape}")
            if np.any(xi < 0) or np.any(xi > 1):
                raise InvalidParameterError("genome powers must lie in [0, 1]")
            object.__setattr__(self, "xi", xi)

    @property
    def num_users(self) -> int:
        return self.bits.size // 2

    @property
    def is_hybrid(self) -> bool:
        return self.xi is not None

    def bit_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from_string(cls, text: str) -> "Genome":
        return cls(bits=np.array([int(c) for c in text.strip()], dtype=np.uint8))

    @classmethod
    def full(cls, num_users: int, hybrid: bool = False) -> "Genome":
        xi = np.ones(num_users) if hybrid else None
        return cls(bits=np.ones(2 * num_users, dtype=np.uint8), xi=xi)


def split_bits(bits: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(..., 2K) bits -> alpha (..., K), alpha_tilde (..., K)"""
    bits = np.asarray(bits)
    return bits[..., 0::2], bits[..., 1::2]


def encode_genome(assoc: AssociationPattern, power: Optional[PowerAllocation] = None) -> Genome:
    bits = np.empty(2 * assoc.num_users, dtype=np.uint8)
    bits[0::2] = assoc.alpha
    bits[1::2] = assoc.alpha_tilde
    return Genome(bits=bits, xi=None if power is None else power.xi.copy())


def decode_genome(
    genome: Genome,
    p_max: Optional[np.ndarray] = None,
    num_users: Optional[int] = None,
) -> Tuple[AssociationPattern, Optional[PowerAllocation]]:
    """Association flags and, for hybrid genomes, the power allocation"""
    if num_users is not None and genome.num_users != num_users:
        raise InvalidParameterError(f"genome encodes {genome.num_users} users, expected {num_users}")
    alpha, alpha_tilde = split_bits(genome.bits)
    assoc = AssociationPattern(alpha=alpha, alpha_tilde=alpha_tilde)
    if not genome.is_hybrid:
        return assoc, None
    if p_max is None:
        raise InvalidParameterError("decoding a hybrid genome needs p_max")
    return assoc, PowerAllocation(xi=genome.xi, p_max=np.asarray(p_max, dtype=float))


class FitnessEvaluator:
    """Closed-form fitness of genomes for one scenario and utility

    Association-free statistics are computed once; batches of genomes are
    evaluated with a single vectorized pass.
    """

    def __init__(self, scenario: NetworkScenario, kind: Union[UtilityKind, str]):
        self.scenario = scenario
        self.kind = UtilityKind(kind)
        self.stats = link_statistics(scenario)
        self.p_max = np.asarray(scenario.constants.data_power_max_w, dtype=float)
        self.evaluations = 0

    @property
    def genome_length(self) -> int:
        return 2 * self.scenario.num_users

    def rates(self, bits: np.ndarray, xi: Optional[np.ndarray] = None) -> np.ndarray:
        bits = np.atleast_2d(bits)
        if bits.shape[-1] != self.genome_length:
            raise InvalidParameterError(
                f"genome length {bits.shape[-1]} does not match 2K = {self.genome_length}"
            )
        alpha, alpha_tilde = split_bits(bits)
        powers = self.p_max if xi is None else np.atleast_2d(xi) * self.p_max
        sinr = sinr_closed_form_batch(self.stats, alpha, alpha_tilde, powers)
        return rate_from_sinr(sinr, self.scenario.constants)

    def evaluate_batch(self, bits: np.ndarray, xi: Optional[np.ndarray] = None) -> np.ndarray:
        values = np.atleast_1d(utility(self.rates(bits, xi), self.kind))
        self.evaluations += values.shape[0]
        return values

    def evaluate(self, genome: Genome) -> float:
        xi = None if genome.xi is None else genome.xi[None, :]
        return float(self.evaluate_batch(genome.bits[None, :], xi)[0])


def fitness(genome: Genome, scenario: NetworkScenario, kind: Union[UtilityKind, str]) -> float:
    """utility(closed-form rates of the decoded genome)"""
    return FitnessEvaluator(scenario, kind).evaluate(genome)
