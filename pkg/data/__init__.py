"""
Scenario presets and sweep grids for testing and demonstration
"""

from .sample_scenarios import (
    SAMPLE_SCENARIOS,
    SWEEP_GRIDS,
    get_preset,
    get_sweep_grid,
    list_presets,
)

__all__ = [
    "SAMPLE_SCENARIOS",
    "SWEEP_GRIDS",
    "get_preset",
    "get_sweep_grid",
    "list_presets",
]
