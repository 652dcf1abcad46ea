"""
Channel models: network geometry, fading statistics and MMSE estimation
"""
from channel.estimation import (
    ChannelEstimate,
    EstimationStatistics,
    PilotObservation,
    estimate_channels,
    estimation_statistics,
    estimation_variance,
    mmse_estimate_satellite,
    mmse_estimate_terrestrial,
    psi_matrix,
    receive_pilots,
)
from channel.geometry import (
    ChannelRealization,
    NetworkScenario,
    beam_pattern_gain,
    build_los_vector,
    build_spatial_correlation,
    generate_scenario,
    sample_channels,
    satellite_pathloss_db,
    slant_range,
    terrestrial_pathloss_db,
)

__all__ = [
    "ChannelEstimate",
    "ChannelRealization",
    "EstimationStatistics",
    "NetworkScenario",
    "PilotObservation",
    "beam_pattern_gain",
    "build_los_vector",
    "build_spatial_correlation",
    "estimate_channels",
    "estimation_statistics",
    "estimation_variance",
    "generate_scenario",
    "mmse_estimate_satellite",
    "mmse_estimate_terrestrial",
    "psi_matrix",
    "receive_pilots",
    "sample_channels",
    "satellite_pathloss_db",
    "slant_range",
    "terrestrial_pathloss_db",
]
