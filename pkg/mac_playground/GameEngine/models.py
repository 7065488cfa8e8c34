from typing import Dict, List, Literal, Optional

import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ..config import config
from .metrics import jain_index

REPORT_COLUMNS = ["scenario_id", "algorithm", "user", "nu", "tau", "sum_tau", "jain", "seed"]


class RunReport(BaseModel):
    """Per-algorithm result: per-user success and throughput plus fairness and traces."""

    scenario_id: str
    algorithm: str
    utility: Literal["success", "throughput"] = "throughput"
    success: List[float] = Field(..., description="Per-user success probability nu_i.")
    throughput: List[float] = Field(..., description="Per-user throughput tau_i in bits per channel use.")
    sum_throughput: float
    jain: float
    seed: int = 0
    wall_clock: float = 0.0
    budget: Optional[float] = None
    converged: Optional[bool] = None
    profile: Optional[List[int]] = Field(default=None, description="Pure profile, for algorithms that return one.")
    details: Dict[str, float] = Field(default_factory=dict)
    regret_trace: List[Dict[str, float]] = Field(default_factory=list)
    objective_trace: List[Dict] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_invariants(self) -> "RunReport":
        K = len(self.success)
        if len(self.throughput) != K:
            raise ValueError("success and throughput must have one entry per user")
        if not 1.0 / K - 1e-9 <= self.jain <= 1.0 + 1e-9:
            raise ValueError(f"Jain index {self.jain} outside [1/K, 1]")
        return self

    @classmethod
    def build(cls, scenario_id: str, algorithm: str, success, throughput, seed: int = 0, **kwargs) -> "RunReport":
        """Assemble a report, applying the configured dummy-subslot throughput scale."""
        tau = [float(t) * config.throughput_scale for t in throughput]
        return cls(
            scenario_id=scenario_id,
            algorithm=algorithm,
            success=[float(v) for v in success],
            throughput=tau,
            sum_throughput=float(sum(tau)),
            jain=jain_index(tau),
            seed=seed,
            **kwargs,
        )

    def to_frame(self) -> pd.DataFrame:
        """One row per user with the documented report columns."""
        rows = [
            {
                "scenario_id": self.scenario_id,
                "algorithm": self.algorithm,
                "user": user,
                "nu": nu,
                "tau": tau,
                "sum_tau": self.sum_throughput,
                "jain": self.jain,
                "seed": self.seed,
            }
            for user, (nu, tau) in enumerate(zip(self.success, self.throughput))
        ]
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)

    def summary_json(self) -> str:
        return self.model_dump_json(indent=2, exclude={"regret_trace", "objective_trace"})
