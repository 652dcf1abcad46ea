"""
Throughput analysis and fairness utilities
"""
from analysis.fairness import (
    FitnessEvaluator,
    Genome,
    decode_genome,
    encode_genome,
    fitness,
    split_bits,
    utility,
)
from analysis.throughput import (
    AssociationPattern,
    LinkStatistics,
    MrcDetectors,
    PowerAllocation,
    all_rates,
    link_statistics,
    mrc_detectors,
    rate_from_sinr,
    sinr_closed_form,
    sinr_closed_form_batch,
    sinr_monte_carlo,
)

__all__ = [
    "AssociationPattern",
    "FitnessEvaluator",
    "Genome",
    "LinkStatistics",
    "MrcDetectors",
    "PowerAllocation",
    "all_rates",
    "decode_genome",
    "encode_genome",
    "fitness",
    "link_statistics",
    "mrc_detectors",
    "rate_from_sinr",
    "sinr_closed_form",
    "sinr_closed_form_batch",
    "sinr_monte_carlo",
    "split_bits",
    "utility",
]
