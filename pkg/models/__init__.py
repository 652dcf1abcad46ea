"""
Data models for the load-balancing simulator
"""

from .errors import (
    SimfairError,
    InvalidParameterError,
    CapacityError,
    ChannelModelError,
    ConfigError,
    ReportWriteError,
)
from .settings import (
    UtilityKind,
    OptimizerKind,
    ParentSelection,
    RadioConstants,
    GaConfig,
    HgaConfig,
    SimConfig,
)
from .results import (
    EvaluationMethod,
    RateReport,
    GenerationRecord,
    RunReport,
)

__all__ = [
    "SimfairError",
    "InvalidParameterError",
    "CapacityError",
    "ChannelModelError",
    "ConfigError",
    "ReportWriteError",
    "UtilityKind",
    "OptimizerKind",
    "ParentSelection",
    "RadioConstants",
    "GaConfig",
    "HgaConfig",
    "SimConfig",
    "EvaluationMethod",
    "RateReport",
    "GenerationRecord",
    "RunReport",
]
