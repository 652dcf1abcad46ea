"""
Named scenario presets for testing and demonstration

Each preset is a set of config overrides applied on top of the defaults
(or of a config file). They cover the small validation network, tiny
instances where exhaustive search is feasible, and the larger networks
used for sweeps and comparisons.
"""
from typing import List

# Preset name -> dotted config overrides
SAMPLE_SCENARIOS = {
    "validation": {
        "radio.num_users": 3,
        "radio.num_aps": 4,
        "radio.num_sat_antennas": 8,
        "mc.realizations": 50000,
    },
    "small": {
        "radio.num_users": 4,
        "radio.num_aps": 3,
        "radio.num_sat_antennas": 16,
        "ga.population_q": 50,
        "ga.max_generations": 200,
    },
    "hitting": {
        "radio.num_users": 2,
        "radio.num_aps": 2,
        "radio.num_sat_antennas": 8,
        "ga.population_q": 8,
        "ga.mutation_rate": 0.3,
        "ga.max_generations": 500,
    },
    "desk": {
        "radio.num_users": 15,
        "radio.num_aps": 15,
        "ga.population_q": 50,
        "ga.max_generations": 300,
    },
    "table_i": {
        "radio.num_users": 20,
        "radio.num_aps": 10,
        "radio.num_sat_antennas": 100,
        "ga.population_q": 50,
        "ga.max_generations": 300,
    },
}

# Default sweep grids per axis
SWEEP_GRIDS = {
    "num_users": [10, 20, 30, 40, 50, 60, 70],
    "num_aps": [10, 20, 30, 40, 50],
    "generations": [0, 25, 50, 100, 200, 300],
}


def get_preset(name: str) -> List[str]:
    """Overrides of a preset as `key=value` strings"""
    if name not in SAMPLE_SCENARIOS:
        raise KeyError(f"unknown preset '{name}'; available: {', '.join(list_presets())}")
    return [f"{key}={value}" for key, value in SAMPLE_SCENARIOS[name].items()]


def list_presets() -> List[str]:
    return sorted(SAMPLE_SCENARIOS)


def get_sweep_grid(axis: str) -> List[int]:
    return list(SWEEP_GRIDS[axis])
