import json
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..config import config
from ..utils import ScenarioValidationError

State = Union[float, Tuple[float, float]]


def _check_pmf(name: str, pmf: Sequence[float]) -> None:
    if any(p < 0 for p in pmf):
        raise ScenarioValidationError(name, "probabilities must be nonnegative")
    total = math.fsum(pmf)
    if abs(total - 1.0) > config.pmf_tol:
        raise ScenarioValidationError(name, f"probabilities sum to {total!r}, expected 1")


def _check_increasing(name: str, values: Sequence[float]) -> None:
    if not values:
        raise ScenarioValidationError(name, "must not be empty")
    if any(v < 0 for v in values):
        raise ScenarioValidationError(name, "values must be nonnegative")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ScenarioValidationError(name, "values must be strictly increasing")


class Scenario(BaseModel):
    """A discrete fading MAC (or MAC-WT) instance.

    Gains are power gains, powers are in linear units with unit noise variance,
    rates are in bits per channel use. Users are indexed from 0.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    num_users: int = Field(..., gt=0, description="Number of transmitting users K.")
    bob_gains: List[List[float]] = Field(..., description="Per-user channel-gain alphabet towards the receiver.")
    bob_pmf: List[List[float]] = Field(..., description="Per-user probabilities of bob_gains.")
    eve_gains: List[List[float]] = Field(default_factory=list, description="Per-user channel-gain alphabet towards Eve.")
    eve_pmf: List[List[float]] = Field(default_factory=list, description="Per-user probabilities of eve_gains.")
    power_grid: List[List[float]] = Field(..., description="Per-user transmit power levels.")
    power_budget: List[float] = Field(..., description="Per-user average power budget.")
    rate_mode: Literal["fixed", "multi"] = "fixed"
    fixed_rate: List[float] = Field(default_factory=list, description="Per-user rate in fixed mode.")
    rate_set: List[List[float]] = Field(default_factory=list, description="Per-user rate alphabet in multi mode.")
    csi_mode: Literal["no_eve", "full_eve_csi", "eve_distribution_only"] = "no_eve"
    outage_threshold: Optional[float] = Field(default=None, description="Secrecy-outage threshold for eve_distribution_only.")

    @model_validator(mode="after")
    def _check_invariants(self) -> "Scenario":
        K = self.num_users
        per_user = {"bob_gains": self.bob_gains, "bob_pmf": self.bob_pmf, "power_grid": self.power_grid, "power_budget": self.power_budget}
        if self.rate_mode == "fixed":
            per_user["fixed_rate"] = self.fixed_rate
        else:
            per_user["rate_set"] = self.rate_set
        if self.has_eve:
            per_user["eve_gains"] = self.eve_gains
            per_user["eve_pmf"] = self.eve_pmf
        for name, values in per_user.items():
            if len(values) != K:
                raise ScenarioValidationError(name, f"expected {K} entries (one per user), got {len(values)}")

        for i in range(K):
            _check_increasing(f"bob_gains[{i}]", self.bob_gains[i])
            if len(self.bob_pmf[i]) != len(self.bob_gains[i]):
                raise ScenarioValidationError(f"bob_pmf[{i}]", "length differs from bob_gains")
            _check_pmf(f"bob_pmf[{i}]", self.bob_pmf[i])
            _check_increasing(f"power_grid[{i}]", self.power_grid[i])
            if self.power_budget[i] < 0:
                raise ScenarioValidationError(f"power_budget[{i}]", "must be nonnegative")
            if self.has_eve:
                _check_increasing(f"eve_gains[{i}]", self.eve_gains[i])
                if len(self.eve_pmf[i]) != len(self.eve_gains[i]):
                    raise ScenarioValidationError(f"eve_pmf[{i}]", "length differs from eve_gains")
                _check_pmf(f"eve_pmf[{i}]", self.eve_pmf[i])
            if self.rate_mode == "fixed":
                if self.fixed_rate[i] <= 0:
                    raise ScenarioValidationError(f"fixed_rate[{i}]", "rates must be strictly positive")
            else:
                if not self.rate_set[i] or any(r <= 0 for r in self.rate_set[i]):
                    raise ScenarioValidationError(f"rate_set[{i}]", "must be a non-empty list of positive rates")
                if any(b <= a for a, b in zip(self.rate_set[i], self.rate_set[i][1:])):
                    raise ScenarioValidationError(f"rate_set[{i}]", "rates must be strictly increasing")

        if self.csi_mode == "eve_distribution_only":
            if self.outage_threshold is None or not 0.0 < self.outage_threshold < 1.0:
                raise ScenarioValidationError("outage_threshold", "must lie in (0, 1) when csi_mode is eve_distribution_only")
        return self

    @property
    def has_eve(self) -> bool:
        return self.csi_mode != "no_eve"

    @property
    def state_includes_eve(self) -> bool:
        """Whether a user's observed state is the (h, g) pair rather than h alone."""
        return self.csi_mode == "full_eve_csi"

    def num_states(self, user: int) -> int:
        n = len(self.bob_gains[user])
        return n * len(self.eve_gains[user]) if self.state_includes_eve else n

    def states(self, user: int) -> List[State]:
        """User-observable states in canonical order (h-major for (h, g) pairs)."""
        if self.state_includes_eve:
            return [(h, g) for h in self.bob_gains[user] for g in self.eve_gains[user]]
        return list(self.bob_gains[user])

    def state_probs(self, user: int) -> np.ndarray:
        alpha = np.asarray(self.bob_pmf[user], dtype=float)
        if self.state_includes_eve:
            return np.outer(alpha, np.asarray(self.eve_pmf[user], dtype=float)).ravel()
        return alpha

    def state_bob_gains(self, user: int) -> np.ndarray:
        h = np.asarray(self.bob_gains[user], dtype=float)
        return np.repeat(h, len(self.eve_gains[user])) if self.state_includes_eve else h

    def state_eve_gains(self, user: int) -> Optional[np.ndarray]:
        if not self.state_includes_eve:
            return None
        return np.tile(np.asarray(self.eve_gains[user], dtype=float), len(self.bob_gains[user]))

    def rates(self, user: int) -> List[float]:
        return [self.fixed_rate[user]] if self.rate_mode == "fixed" else list(self.rate_set[user])

    def max_rate(self, user: int) -> float:
        return max(self.rates(user))

    def with_budget(self, budget: float, grid_cap_multiple: Optional[float] = None) -> "Scenario":
        """Copy of the scenario with every user's budget set to `budget`.

        With `grid_cap_multiple`, power levels above `grid_cap_multiple * budget` are dropped
        (the lowest level is always kept).
        """
        grid = self.power_grid
        if grid_cap_multiple is not None:
            cap = grid_cap_multiple * budget
            grid = [[p for p in levels if p <= cap] or [levels[0]] for levels in self.power_grid]
        return Scenario.model_validate({**self.model_dump(), "power_budget": [float(budget)] * self.num_users, "power_grid": grid})

    @classmethod
    def from_dict(cls, data: Dict) -> "Scenario":
        """Validate a raw mapping, reporting the first failing field."""
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(part) for part in error["loc"]) or "scenario"
            raise ScenarioValidationError(field, error["msg"]) from e

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> "Scenario":
        with open(path, "r", encoding="utf-8") as file:
            try:
                data = json.load(file)
            except json.JSONDecodeError as e:
                raise ScenarioValidationError(str(path), f"invalid JSON: {e}") from e
        return cls.from_dict(data)


class PowerPolicy(BaseModel):
    """One user's pure action: a power per observable state, plus the transmit rate."""

    model_config = ConfigDict(frozen=True)

    user: int
    index: int = Field(..., description="Position in the user's enumerated feasible policy list.")
    state_space: List[State]
    powers: List[float] = Field(..., description="Power assigned to each state, aligned with state_space.")
    rate: float

    @model_validator(mode="after")
    def _check_alignment(self) -> "PowerPolicy":
        if len(self.powers) != len(self.state_space):
            raise ValueError("every state needs exactly one assigned power")
        return self

    @property
    def assignment(self) -> Dict[State, float]:
        return dict(zip(self.state_space, self.powers))


class StrategyProfile(BaseModel):
    """Per-user mixed strategies over the enumerated feasible policies."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    strategies: List[np.ndarray]

    @field_validator("strategies", mode="before")
    @classmethod
    def _as_arrays(cls, value):
        return [np.asarray(phi, dtype=float) for phi in value]

    @field_validator("strategies")
    @classmethod
    def _check_pmfs(cls, value: List[np.ndarray]) -> List[np.ndarray]:
        for i, phi in enumerate(value):
            if phi.ndim != 1 or phi.size == 0:
                raise ValueError(f"strategy of user {i} must be a non-empty vector")
            if np.any(phi < 0):
                raise ValueError(f"strategy of user {i} has negative entries")
            if abs(math.fsum(phi) - 1.0) > config.pmf_tol:
                raise ValueError(f"strategy of user {i} sums to {math.fsum(phi)!r}")
        return value

    @classmethod
    def pure(cls, sizes: Sequence[int], profile: Sequence[int]) -> "StrategyProfile":
        strategies = []
        for size, index in zip(sizes, profile):
            phi = np.zeros(size)
            phi[index] = 1.0
            strategies.append(phi)
        return cls(strategies=strategies)

    @classmethod
    def uniform(cls, sizes: Sequence[int]) -> "StrategyProfile":
        return cls(strategies=[np.full(size, 1.0 / size) for size in sizes])

    def __getitem__(self, user: int) -> np.ndarray:
        return self.strategies[user]

    def __len__(self) -> int:
        return len(self.strategies)
