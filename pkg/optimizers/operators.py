"""
Variation operators for binary and real-coded genomes

Binary: one-point / two-point / uniform masked crossover and k-bit flip
mutation. Real: bounded simulated binary crossover and polynomial mutation
on the unit interval.
"""
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from models.errors import InvalidParameterError


class MaskKind(str, Enum):
    """Crossover mask families"""
    ONE_POINT = "one_point"
    TWO_POINT = "two_point"
    UNIFORM = "uniform"


MASK_KINDS = (MaskKind.ONE_POINT, MaskKind.TWO_POINT, MaskKind.UNIFORM)


def choose_mask_kind(rng: np.random.Generator, probs: Sequence[float]) -> MaskKind:
    """Pick one-point with eps1, two-point with eps2, uniform otherwise"""
    eps1, eps2 = probs[0], probs[1]
    u = rng.random()
    if u < eps1:
        return MaskKind.ONE_POINT
    if u < eps1 + eps2:
        return MaskKind.TWO_POINT
    return MaskKind.UNIFORM


def one_point_mask(length: int, cut: int) -> np.ndarray:
    if not 1 <= cut <= length - 1:
        raise InvalidParameterError(f"cut {cut} outside 1..{length - 1}")
    return (np.arange(length) >= cut).astype(np.uint8)


def two_point_mask(length: int, first: int, second: int) -> np.ndarray:
    if not 1 <= first < second <= length:
        raise InvalidParameterError(f"cuts ({first}, {second}) must satisfy 1 <= first < second <= {length}")
    idx = np.arange(length)
    return (~((idx >= first) & (idx < second))).astype(np.uint8)


def make_mask(kind, length: int, rng: np.random.Generator) -> np.ndarray:
    """Random crossover mask of the requested family"""
    kind = MaskKind(kind)
    if length < 2:
        raise InvalidParameterError(f"mask length must be at least 2, got {length}")
    if kind == MaskKind.ONE_POINT:
        return one_point_mask(length, int(rng.integers(1, length)))
    if kind == MaskKind.TWO_POINT:
        if length == 2:
            return two_point_mask(length, 1, 2)
        first, second = np.sort(rng.choice(np.arange(1, length), size=2, replace=False))
        return two_point_mask(length, int(first), int(second))
    return (rng.random(length) >= 0.5).astype(np.uint8)


def masked_crossover(parent1: np.ndarray, parent2: np.ndarray, mask: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """child1 takes parent1 where mask = 1 and parent2 elsewhere; child2 the reverse"""
    p1, p2, m = np.asarray(parent1), np.asarray(parent2), np.asarray(mask).astype(bool)
    if p1.shape != p2.shape or p1.shape != m.shape:
        raise InvalidParameterError(f"shape mismatch: {p1.shape}, {p2.shape}, mask {m.shape}")
    return np.where(m, p1, p2), np.where(m, p2, p1)


def mutation_mask(length: int, mutate_count: int, rng: np.random.Generator) -> np.ndarray:
    if not 1 <= mutate_count <= length:
        raise InvalidParameterError(f"mutate count {mutate_count} outside 1..{length}")
    mask = np.zeros(length, dtype=np.uint8)
    mask[rng.choice(length, size=mutate_count, replace=False)] = 1
    return mask


def bitwise_mutation(genome_bits: np.ndarray, rng: np.random.Generator, mutate_count: int) -> np.ndarray:
    """Flip exactly mutate_count distinct bits"""
    bits = np.asarray(genome_bits, dtype=np.uint8)
    return bits ^ mutation_mask(bits.size, mutate_count, rng)


def normalize_power(p, p_max):
    """xi = p / P_max"""
    p_arr = np.asarray(p, dtype=float)
    p_max_arr = np.asarray(p_max, dtype=float)
    if np.any(p_max_arr <= 0):
        raise InvalidParameterError("P_max must be positive")
    if np.any(p_arr < 0) or np.any(p_arr > p_max_arr):
        raise InvalidParameterError("power must lie in [0, P_max]")
    return p_arr / p_max_arr


def denormalize_power(xi, p_max):
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr < 0) or np.any(xi_arr > 1):
        raise InvalidParameterError("xi must lie in [0, 1]")
    return xi_arr * np.asarray(p_max, dtype=float)


def sbx_spread(lower: np.ndarray, upper: np.ndarray, eta_c: float, mu: np.ndarray) -> np.ndarray:
    """Boundary-aware SBX spread factor for parents lower <= upper in [0, 1]

    Uses the tighter of the two boundary distances so that both children
    stay inside the unit interval with a single, shared spread.
    """
    diff = upper - lower
    safe_diff = np.where(diff > 1e-14, diff, 1.0)
    beta = 1.0 + 2.0 * np.minimum(lower, 1.0 - upper) / safe_diff
    vartheta = 2.0 - beta ** (-(eta_c + 1.0))
    exponent = 1.0 / (eta_c + 1.0)
    inner = np.where(mu <= 1.0 / vartheta, vartheta * mu, 1.0 / np.maximum(2.0 - vartheta * mu, 1e-300))
    return inner**exponent


def sbx_crossover(
    xi_p1: np.ndarray,
    xi_p2: np.ndarray,
    eta_c: float,
    rng: np.random.Generator,
    clamp: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """Bounded simulated binary crossover on [0, 1]^K

    Children are symmetric around the parents' midpoint; coordinates where
    the parents coincide are copied unchanged.
    """
    p1 = np.asarray(xi_p1, dtype=float)
    p2 = np.asarray(xi_p2, dtype=float)
    if p1.shape != p2.shape:
        raise InvalidParameterError(f"parent shapes differ: {p1.shape} vs {p2.shape}")
    mu = rng.random(p1.shape)
    lower, upper = np.minimum(p1, p2), np.maximum(p1, p2)
    spread = sbx_spread(lower, upper, eta_c, mu)
    midpoint = 0.5 * (p1 + p2)
    half_gap = 0.5 * spread * (p2 - p1)
    same = np.abs(p2 - p1) <= 1e-14
    c1 = np.where(same, p1, midpoint - half_gap)
    c2 = np.where(same, p2, midpoint + half_gap)
    if clamp:
        c1, c2 = np.clip(c1, 0.0, 1.0), np.clip(c2, 0.0, 1.0)
    return c1, c2


def polynomial_delta(xi: np.ndarray, eta_m: float, mu: np.ndarray) -> np.ndarray:
    """Polynomial-mutation perturbation with delta = min(xi, 1 - xi)"""
    xi = np.asarray(xi, dtype=float)
    delta = np.minimum(xi, 1.0 - xi)
    exponent = 1.0 / (eta_m + 1.0)
    tail = (1.0 - delta) ** (eta_m + 1.0)
    low = (2.0 * mu + (1.0 - 2.0 * mu) * tail) ** exponent - 1.0
    high = 1.0 - (2.0 * (1.0 - mu) + 2.0 * (mu - 0.5) * tail) ** exponent
    return np.where(mu <= 0.5, low, high)


def polynomial_mutation(
    xi: np.ndarray,
    eta_m: float,
    rng: np.random.Generator,
    rate: float = 1.0,
) -> np.ndarray:
    """Perturb each coordinate with probability rate; result stays in [0, 1]"""
    xi = np.asarray(xi, dtype=float)
    selected = rng.random(xi.shape) < rate
    mu = rng.random(xi.shape)
    mutated = np.clip(xi + polynomial_delta(xi, eta_m, mu), 0.0, 1.0)
    return np.where(selected, mutated, xi)
