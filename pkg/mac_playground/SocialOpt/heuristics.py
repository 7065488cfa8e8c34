"""The probability-ordered power heuristic and the disagreement point built on it."""

from typing import List, Literal, Optional

import numpy as np

from ..Channel.models import PowerPolicy, Scenario, StrategyProfile
from ..Channel.policies import PolicySpace, policy_space
from ..config import config
from ..GameEngine.game import MacGame, Utility
from .models import DisagreementPoint


def state_rank(scenario: Scenario, user: int) -> np.ndarray:
    """State indices from most to least important.

    States are sorted by descending probability; ties go to the larger receiver gain,
    then (for (h, g) states) to the smaller eavesdropper gain.
    """
    probs = scenario.state_probs(user)
    h = scenario.state_bob_gains(user)
    g = scenario.state_eve_gains(user)
    keys = [probs, h] if g is None else [probs, h, -g]
    # np.lexsort sorts ascending by the last key first
    return np.lexsort([-k for k in reversed(keys)])


def heuristic_target(space: PolicySpace, rank: np.ndarray) -> np.ndarray:
    """Unconstrained heuristic levels: the top state gets the highest level, the next one level less, ..."""
    target = np.empty(space.num_states, dtype=int)
    target[rank] = np.maximum(space.num_levels - 1 - np.arange(space.num_states), 0)
    return target


def project_to_budget(space: PolicySpace, rank: np.ndarray, target: np.ndarray, budget: float) -> np.ndarray:
    """Lexicographically largest (in rank order) feasible levels not above `target` and non-increasing along `rank`.

    Walks the states in rank order and keeps each one as high as the budget allows with
    every later state at the lowest level, so power is taken away from the least
    probable states first.
    """
    grid, probs = space.grid, space.state_probs
    levels = np.zeros(space.num_states, dtype=int)
    spent = 0.0
    floor = float(grid[0] * probs.sum())
    cap = space.num_levels - 1
    for s in rank:
        floor -= grid[0] * probs[s]
        level = min(int(target[s]), cap)
        while level > 0 and spent + grid[level] * probs[s] + floor > budget + config.feasibility_tol:
            level -= 1
        levels[s] = level
        spent += grid[level] * probs[s]
        cap = level
    return levels


def heuristic_index(scenario: Scenario, user: int, space: Optional[PolicySpace] = None) -> int:
    """Index of the heuristic policy in `user`'s feasible policy list (lowest rate)."""
    space = policy_space(scenario, user) if space is None else space
    rank = state_rank(scenario, user)
    levels = project_to_budget(space, rank, heuristic_target(space, rank), scenario.power_budget[user])
    return space.index_of(levels, rate_index=0)


def heuristic_action(scenario: Scenario, user: int, space: Optional[PolicySpace] = None) -> PowerPolicy:
    """Power levels in descending order over states sorted by descending probability, projected onto the budget.

    Raises:
        EmptyFeasibleSetError: If the user has no feasible policy at all.
    """
    space = policy_space(scenario, user) if space is None else space
    return space.policy(heuristic_index(scenario, user, space))


def ordering_mask(space: PolicySpace, rank: np.ndarray) -> np.ndarray:
    """Policies whose levels never increase from a more important state to a less important one."""
    ordered = space.levels[:, rank]
    return np.all(ordered[:, :-1] >= ordered[:, 1:], axis=1)


def disagreement_point(
    game: MacGame,
    horizon: int = 100_000,
    seed: int = 0,
    mode: Literal["exact", "sampled"] = "exact",
    utility: Utility = "success",
) -> DisagreementPoint:
    """Utilities of the all-heuristic profile.

    Args:
        game: Game whose users play their heuristic policies.
        horizon: Slots averaged in sampled mode.
        seed: Seed of the sampled slots.
        mode: "exact" reads the expected utilities; "sampled" averages observed ACKs.
        utility: Success probability or throughput.

    Returns:
        DisagreementPoint with the heuristic profile and its values.
    """
    profile = [heuristic_index(game.scenario, i, space) for i, space in enumerate(game.spaces)]
    if mode == "exact":
        values = game.profile_utilities(profile, utility)
        return DisagreementPoint(profile=profile, values=[float(v) for v in values], mode=mode, utility=utility)

    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    rng = np.random.default_rng(seed)
    acks, rates = game.sample_acks(StrategyProfile.pure(game.sizes, profile), horizon, rng)
    observed = acks if utility == "success" else acks * rates
    values: List[float] = [float(v) for v in observed.mean(axis=0)]
    return DisagreementPoint(profile=profile, values=values, horizon=horizon, mode=mode, utility=utility)
