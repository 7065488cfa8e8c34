"""Enumeration of each user's feasible pure policies."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..config import config
from ..utils import EmptyFeasibleSetError, TooLargeError
from .models import PowerPolicy, Scenario


@dataclass(frozen=True)
class PolicySpace:
    """Array view of one user's feasible policies, in enumeration order.

    Row `a` of `levels` holds the grid index used in every state; `rate_index[a]`
    indexes the user's rate list. Policies are sorted by (rate index, power indices).
    """

    user: int
    levels: np.ndarray  # (M, S) int
    rate_index: np.ndarray  # (M,) int
    grid: np.ndarray  # (L,)
    rate_values: np.ndarray  # (R,)
    state_probs: np.ndarray  # (S,)
    states: list = field(repr=False)

    def __len__(self) -> int:
        return self.levels.shape[0]

    @property
    def num_states(self) -> int:
        return self.levels.shape[1]

    @property
    def num_levels(self) -> int:
        return self.grid.size

    @property
    def num_rates(self) -> int:
        return self.rate_values.size

    @property
    def powers(self) -> np.ndarray:
        return self.grid[self.levels]

    @property
    def rates(self) -> np.ndarray:
        return self.rate_values[self.rate_index]

    @property
    def average_powers(self) -> np.ndarray:
        return self.powers @ self.state_probs

    def policy(self, index: int) -> PowerPolicy:
        return PowerPolicy(
            user=self.user,
            index=int(index),
            state_space=self.states,
            powers=[float(p) for p in self.powers[index]],
            rate=float(self.rates[index]),
        )

    def index_of(self, levels: np.ndarray, rate_index: int = 0) -> int:
        """Position of the policy with the given grid indices and rate index."""
        match = np.flatnonzero(np.all(self.levels == np.asarray(levels), axis=1) & (self.rate_index == rate_index))
        if match.size == 0:
            raise KeyError(f"levels {list(levels)} with rate index {rate_index} is not a feasible policy of user {self.user}")
        return int(match[0])

    def locate(self, policy: PowerPolicy) -> Optional[int]:
        """Position of the policy with the same per-state powers and rate, or None if infeasible here."""
        if len(policy.powers) != self.num_states:
            return None
        match = np.flatnonzero(np.all(self.powers == np.asarray(policy.powers), axis=1) & (self.rates == policy.rate))
        return int(match[0]) if match.size else None


def policy_space(scenario: Scenario, user: int) -> PolicySpace:
    """Build the feasible policy space of `user` by brute force over all power maps.

    Raises:
        EmptyFeasibleSetError: If no map satisfies the user's average-power budget.
        TooLargeError: If the raw map count exceeds `config.enumeration_cap`.
    """
    grid = np.asarray(scenario.power_grid[user], dtype=float)
    probs = scenario.state_probs(user)
    num_states, num_levels = probs.size, grid.size
    raw = num_levels**num_states
    if raw > config.enumeration_cap:
        raise TooLargeError(raw, config.enumeration_cap, what=f"power-map space of user {user}")

    # C-order indices enumerate maps lexicographically
    maps = np.indices((num_levels,) * num_states).reshape(num_states, -1).T
    averages = grid[maps] @ probs
    budget = scenario.power_budget[user]
    feasible = maps[averages <= budget + config.feasibility_tol]
    if feasible.shape[0] == 0:
        raise EmptyFeasibleSetError(user, budget, float(averages.min()))

    rate_values = np.asarray(scenario.rates(user), dtype=float)
    num_rates = rate_values.size
    return PolicySpace(
        user=user,
        levels=np.tile(feasible, (num_rates, 1)),
        rate_index=np.repeat(np.arange(num_rates), feasible.shape[0]),
        grid=grid,
        rate_values=rate_values,
        state_probs=probs,
        states=scenario.states(user),
    )


def enumerate_feasible_policies(scenario: Scenario, user: int) -> List[PowerPolicy]:
    """List every feasible pure policy of `user` in lexicographic (rate, powers) order."""
    space = policy_space(scenario, user)
    return [space.policy(a) for a in range(len(space))]


def policy_average_power(policy: PowerPolicy, scenario: Scenario) -> float:
    """Probability-weighted mean power of `policy` under its user's state distribution."""
    probs = scenario.state_probs(policy.user)
    return float(np.dot(probs, np.asarray(policy.powers, dtype=float)))
