"""
Result record shared by all association optimizers
"""
from dataclasses import dataclass, field
from typing import List

from analysis.fairness import Genome
from models.results import GenerationRecord


@dataclass
class SearchResult:
    """Best genome found by a search together with its cost"""
    best_genome: Genome
    best_value: float
    evaluations: int
    wall_time_s: float
    generation_found: int = 0
    history: List[GenerationRecord] = field(default_factory=list)

    @property
    def best_history(self) -> List[float]:
        return [row.best_fitness for row in self.history]
