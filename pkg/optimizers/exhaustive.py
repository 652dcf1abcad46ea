"""
Exhaustive association search over all 4^K patterns
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple, Union

import numpy as np

from analysis.fairness import FitnessEvaluator, Genome
from channel.geometry import NetworkScenario
from config import Config
from models.errors import CapacityError
from models.settings import UtilityKind
from optimizers.base import SearchResult

logger = logging.getLogger(__name__)


def index_to_bits(indices: np.ndarray, length: int) -> np.ndarray:
    """Binary representation of each index, most significant bit first"""
    indices = np.asarray(indices, dtype=np.int64)
    shifts = np.arange(length - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def _search_range(
    scenario: NetworkScenario,
    kind: UtilityKind,
    lo: int,
    hi: int,
    batch: int,
) -> Tuple[float, int, int]:
    """Best (value, index) over [lo, hi); the lowest index wins ties"""
    evaluator = FitnessEvaluator(scenario, kind)
    length = evaluator.genome_length
    best_value, best_index = -np.inf, -1
    for start in range(lo, hi, batch):
        indices = np.arange(start, min(start + batch, hi), dtype=np.int64)
        values = evaluator.evaluate_batch(index_to_bits(indices, length))
        leader = int(np.argmax(values))
        if values[leader] > best_value:
            best_value, best_index = float(values[leader]), int(indices[leader])
    return best_value, best_index, evaluator.evaluations


def exhaustive_search(
    scenario: NetworkScenario,
    kind: Union[UtilityKind, str],
    include_zero_index: bool = True,
    max_bits: int = Config.EXHAUSTIVE_MAX_BITS,
    workers: int = 1,
    batch: int = Config.EXHAUSTIVE_BATCH,
) -> SearchResult:
    """Globally optimal association by full enumeration"""
    kind = UtilityKind(kind)
    length = 2 * scenario.num_users
    if length > max_bits:
        raise CapacityError(
            f"exhaustive search over {length} bits exceeds the cap of {max_bits} bits"
        )
    start_time = time.perf_counter()
    first = 0 if include_zero_index else 1
    total = 1 << length
    logger.info(f"Enumerating {total - first} association patterns for K={scenario.num_users}")

    if workers > 1 and total - first > batch:
        bounds = np.linspace(first, total, workers + 1, dtype=np.int64)
        ranges: List[Tuple[int, int]] = [
            (int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_search_range, scenario, kind, lo, hi, batch) for lo, hi in ranges]
            parts = [future.result() for future in futures]
    else:
        parts = [_search_range(scenario, kind, first, total, batch)]

    best_value, best_index, evaluations = -np.inf, -1, 0
    for value, index, count in parts:
        evaluations += count
        # parts are in ascending index order, so strict > keeps the lowest index
        if value > best_value:
            best_value, best_index = value, index

    bits = index_to_bits(np.array([best_index]), length)[0]
    elapsed = time.perf_counter() - start_time
    logger.info(f"Exhaustive optimum {best_value:.6g} at index {best_index} ({elapsed:.2f}s)")
    return SearchResult(
        best_genome=Genome(bits=bits),
        best_value=best_value,
        evaluations=evaluations,
        wall_time_s=elapsed,
    )

