from typing import Dict, List, Literal, Optional, Union

import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

TRACE_COLUMNS = ["epoch", "objective", "benchmark", "best", "accepted", "restart", "experimenting_users"]


class DisagreementPoint(BaseModel):
    """Utilities reached when every user plays its heuristic policy."""

    profile: List[int] = Field(..., description="Heuristic policy index of every user.")
    values: List[float] = Field(..., description="Disagreement value delta_i of every user.")
    horizon: int = Field(default=0, ge=0, description="Slots averaged in sampled mode; 0 for exact evaluation.")
    mode: Literal["exact", "sampled"] = "exact"
    utility: Literal["success", "throughput"] = "success"

    @model_validator(mode="after")
    def _check_values(self) -> "DisagreementPoint":
        if len(self.values) != len(self.profile):
            raise ValueError("one disagreement value per user is required")
        if any(v < 0 for v in self.values):
            raise ValueError("disagreement values must be nonnegative")
        if self.utility == "success" and any(v > 1 for v in self.values):
            raise ValueError("success-probability disagreement values must lie in [0, 1]")
        return self


class SearchConfig(BaseModel):
    """Parameters of the stochastic local search over pure profiles."""

    objective: Literal["weighted_sum", "nash_product"] = "weighted_sum"
    weights: Optional[List[float]] = Field(default=None, description="gamma_i of the weighted sum; all ones when unset.")
    disagreement: Optional[DisagreementPoint] = None
    utility: Literal["success", "throughput"] = "success"
    window: int = Field(default=1000, ge=1, description="Slots per candidate in sampled evaluation.")
    experiment_prob: Union[float, List[float]] = Field(default=0.5, description="rho_i, per user or shared.")
    explore: float = Field(default=0.3, ge=0.0, le=1.0, description="Probability an experiment picks a uniformly random policy.")
    max_epochs: int = Field(default=5000, ge=1)
    patience: int = Field(default=200, ge=1, description="Consecutive rejections before the climb restarts from a random profile.")
    seed: int = 0
    evaluation: Literal["exact", "sampled"] = "exact"
    initial_profile: Optional[List[int]] = Field(default=None, description="Starting profile of the first climb; uniformly random when unset.")

    @field_validator("weights")
    @classmethod
    def _check_weights(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and any(w < 0 for w in value):
            raise ValueError("weights must be nonnegative")
        return value

    @field_validator("experiment_prob")
    @classmethod
    def _check_rho(cls, value):
        for rho in value if isinstance(value, list) else [value]:
            if not 0.0 < rho <= 1.0:
                raise ValueError(f"experiment probability must lie in (0, 1], got {rho}")
        return value

    @model_validator(mode="after")
    def _check_objective(self) -> "SearchConfig":
        if self.objective == "nash_product" and self.disagreement is None:
            raise ValueError("nash_product search needs a disagreement point")
        return self

    def rhos(self, num_users: int) -> List[float]:
        if isinstance(self.experiment_prob, list):
            if len(self.experiment_prob) != num_users:
                raise ValueError(f"expected {num_users} experiment probabilities, got {len(self.experiment_prob)}")
            return list(self.experiment_prob)
        return [self.experiment_prob] * num_users

    def gammas(self, num_users: int) -> List[float]:
        if self.weights is None:
            return [1.0] * num_users
        if len(self.weights) != num_users:
            raise ValueError(f"expected {num_users} weights, got {len(self.weights)}")
        return list(self.weights)


class SearchResult(BaseModel):
    """Best profile found by one search run, with its exact utilities."""

    profile: List[int]
    objective: float = Field(..., description="Exact objective of the best profile seen.")
    values: List[float] = Field(..., description="Exact per-user utility used by the objective.")
    success: List[float]
    throughput: List[float]
    epochs: int
    evaluations: int
    restarts: int
    seed: int
    trace: List[Dict] = Field(default_factory=list)

    def trace_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.trace, columns=TRACE_COLUMNS)


class ParetoCertificate(BaseModel):
    profile: List[int]
    is_pareto: bool
    dominator: Optional[List[int]] = Field(default=None, description="First dominating profile in lexicographic order.")
    dominator_values: Optional[List[float]] = None


class NbsCertificate(BaseModel):
    profile: List[int]
    is_nbs: bool
    product: float = Field(..., description="Nash product of the profile; -inf outside the bargaining set.")
    best_product: float
    gap: float
    best_profile: List[int] = Field(..., description="Lexicographically first product maximizer.")
    ties: List[List[int]] = Field(default_factory=list, description="Other maximizers within tolerance, capped.")
