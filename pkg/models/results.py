"""
Result models produced by evaluations, optimizers and experiment runs
"""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from models.settings import UtilityKind


class EvaluationMethod(str, Enum):
    """How a rate report was produced"""
    CLOSED_FORM = "closed-form"
    MONTE_CARLO = "monte-carlo"


class RateReport(BaseModel):
    """Per-user SINR and ergodic throughput"""
    sinr: List[float]
    rate_mbps: List[float]
    method: EvaluationMethod
    mc_realizations: int = 0
    diagnostics: List[str] = Field(default_factory=list)


class GenerationRecord(BaseModel):
    """One row of an optimizer convergence history"""
    generation: int
    best_fitness: float
    mean_fitness: float
    evals_cum: int


class UserRow(BaseModel):
    """One row of users.csv"""
    user_id: int
    x_m: float
    y_m: float
    alpha: int
    alpha_tilde: int
    xi: float
    p_w: float
    sinr: float
    rate_mbps: float


class ModeShares(BaseModel):
    """Percentage of users per connection mode"""
    satellite_only: float
    aps_only: float
    both: float
    unserved: float


class RunReport(BaseModel):
    """Everything an optimize/exhaustive run persists"""
    command: str
    config: Dict[str, Any]
    scenario_digest: str
    optimizer: str
    utility: UtilityKind
    best_value: float
    baseline_value: float
    utilities: Dict[str, float]
    baseline_utilities: Dict[str, float]
    total_throughput_mbps: float
    min_throughput_mbps: float
    mode_shares: ModeShares
    best_bits: List[int]
    best_xi: Optional[List[float]] = None
    evaluations: int
    generation_found: int = 0
    users: List[UserRow]
    history: List[GenerationRecord] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)
