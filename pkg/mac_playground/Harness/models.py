import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..utils import ScenarioValidationError

Algorithm = Literal["cce", "pp", "nbs", "global_baseline", "disagreement_only"]


class SweepSpec(BaseModel):
    """One sum-throughput-versus-budget experiment over a bundled or on-disk scenario."""

    model_config = ConfigDict(extra="forbid")

    scenario: str = Field(..., description="Bundled scenario id or path to a scenario JSON file.")
    parameter: Literal["power_budget"] = "power_budget"
    budgets: List[float] = Field(..., description="Average-power budgets applied to every user, ascending.")
    algorithms: List[Algorithm] = Field(default_factory=lambda: ["cce", "pp", "nbs"])
    seeds: List[int] = Field(default_factory=lambda: [0])
    output_dir: Optional[str] = None
    utility: Literal["success", "throughput"] = "throughput"
    grid_cap_multiple: Optional[float] = Field(default=None, gt=0, description="Drop power levels above this multiple of the budget.")

    # Learner
    mw_eps: Optional[float] = Field(default=None, gt=0, lt=0.5)
    regret_target: float = Field(default=0.05, gt=0)
    max_iters: int = Field(default=10_000, ge=1)
    bandit: bool = False

    # Local search
    gamma: Optional[List[float]] = None
    search_epochs: int = Field(default=5000, ge=1)
    patience: int = Field(default=200, ge=1)
    starts: int = Field(default=1, ge=1)
    carry_incumbent: bool = Field(default=True, description="Start each budget's Pareto search from the previous budget's Pareto profile.")
    disagreement_mode: Literal["exact", "sampled"] = "exact"
    disagreement_horizon: int = Field(default=100_000, ge=1)

    @field_validator("budgets")
    @classmethod
    def _check_budgets(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one budget is required")
        if any(b <= 0 for b in value):
            raise ValueError("budgets must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("budgets must be strictly ascending")
        return value

    @field_validator("algorithms", "seeds")
    @classmethod
    def _non_empty(cls, value: list) -> list:
        if not value:
            raise ValueError("must not be empty")
        return value

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> "SweepSpec":
        try:
            with open(path, "r", encoding="utf-8") as file:
                return cls.model_validate(json.load(file))
        except json.JSONDecodeError as e:
            raise ScenarioValidationError(str(path), f"invalid JSON: {e}") from e
        except ValidationError as e:
            error = e.errors()[0]
            raise ScenarioValidationError(".".join(str(part) for part in error["loc"]) or "sweep", error["msg"]) from e


class BaselineResult(BaseModel):
    """Sum-throughput maximizer over all joint pure profiles (global CSI at a central controller)."""

    profile: List[int]
    sum_throughput: float
    success: List[float]
    throughput: List[float]
