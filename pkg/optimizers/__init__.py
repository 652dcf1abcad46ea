"""
Association optimizers: exhaustive enumeration, binary GA and hybrid GA
"""
from optimizers.base import SearchResult
from optimizers.bcga import BinaryGeneticOptimizer, run_bcga
from optimizers.exhaustive import exhaustive_search, index_to_bits
from optimizers.hga import HybridGeneticOptimizer, run_hga
from optimizers.population import GenomeConstraint, Population, init_population, survival_select

__all__ = [
    "BinaryGeneticOptimizer",
    "GenomeConstraint",
    "HybridGeneticOptimizer",
    "Population",
    "SearchResult",
    "exhaustive_search",
    "index_to_bits",
    "init_population",
    "run_bcga",
    "run_hga",
    "survival_select",
]
