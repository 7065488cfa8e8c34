"""External regret and coarse-correlated-equilibrium verification."""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..GameEngine.game import MacGame, Utility
from .learner import CceResult

TENSOR_VERIFY_LIMIT = 10**6
VERIFY_TOL = 1e-12


@dataclass(frozen=True)
class RegretHistory:
    """Per-user cost vectors of every round and what was played.

    `played[i]` is either a (T,) vector of policy indices or a (T, M_i) array of the
    mixed strategies used each round.
    """

    costs: List[np.ndarray]  # per user (T, M_i)
    played: List[np.ndarray]

    @property
    def rounds(self) -> int:
        return self.costs[0].shape[0]


def external_regret(history: RegretHistory, user: int) -> float:
    """(1/T) max over fixed policies a of sum_t [cost_t(played_t) - cost_t(a)]."""
    costs = history.costs[user]
    played = np.asarray(history.played[user])
    if played.ndim == 1:
        played_cost = costs[np.arange(costs.shape[0]), played.astype(int)].sum()
    else:
        played_cost = np.einsum("tm,tm->", played, costs)
    return float((played_cost - costs.sum(axis=0).min()) / costs.shape[0])


def cost_history(game: MacGame, result: CceResult, use_tensor: Optional[bool] = None) -> RegretHistory:
    """Recompute every round's expected cost vectors from the stored strategies.

    By default the materialized tensor is used for games up to TENSOR_VERIFY_LIMIT joint
    profiles; otherwise the factored contraction of the game engine.
    """
    if not result.strategies:
        raise ValueError("CceResult was produced without keep_history; nothing to verify")
    if use_tensor is None:
        use_tensor = game.tensor is not None and game.joint_size <= TENSOR_VERIFY_LIMIT
    tensor = game.require_tensor() if use_tensor else None
    costs = [np.empty_like(s) for s in result.strategies]
    for t in range(result.rounds):
        profile = [s[t] for s in result.strategies]
        for i in range(game.num_users):
            success = tensor.success_vector(profile, i) if tensor is not None else game.success_vector(profile, i)
            costs[i][t] = _normalized_cost(game, i, success, result.utility)
    return RegretHistory(costs=costs, played=result.strategies)


def _normalized_cost(game: MacGame, user: int, success: np.ndarray, utility: Utility) -> np.ndarray:
    if utility == "success":
        return 1.0 - success
    return 1.0 - success * game.spaces[user].rates / game.max_rates[user]


@dataclass(frozen=True)
class CceVerification:
    """Per-user outcome of the epsilon-CCE check.

    `slack[i]` is min over deviations of E[C_i(dev, a_-i)] - E[C_i(a)] under psi; a user
    passes when slack + eps >= 0.
    """

    passed: List[bool]
    slack: List[float]
    eps: float

    @property
    def all_passed(self) -> bool:
        return all(self.passed)


def verify_cce(game: MacGame, result: CceResult, eps: float, use_tensor: Optional[bool] = None) -> CceVerification:
    """Check that psi is an eps-coarse correlated equilibrium against every constant deviation."""
    history = cost_history(game, result, use_tensor)
    slack = [-external_regret(history, i) for i in range(game.num_users)]
    return CceVerification(passed=[s + eps >= -VERIFY_TOL for s in slack], slack=slack, eps=eps)
