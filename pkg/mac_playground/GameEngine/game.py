"""The one-shot game over pure policies.

Each user's ACK indicator depends only on the joint channel state, every user's power
level in that state and the user's own rate. The engine stores that indicator as a
per-user table and obtains every utility (pure, mixed, per-policy cost vectors, the
full joint tensor) by contracting the table against per-user policy design matrices.
"""

import math
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np

from ..Channel.models import Scenario, StrategyProfile
from ..Channel.policies import PolicySpace, policy_space
from ..config import config
from ..Decoding.ack import eve_lattice, exact_masked_sum, secrecy_margins
from ..Decoding.rates import bob_rates, eve_rates
from ..utils import TooLargeError

Utility = Literal["success", "throughput"]


def _along(values: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = values.size
    return values.reshape(shape)


def _strategy_arrays(strategies) -> List[np.ndarray]:
    if isinstance(strategies, StrategyProfile):
        return strategies.strategies
    return [np.asarray(phi, dtype=float) for phi in strategies]


@dataclass(frozen=True)
class UtilityTensor:
    """Exact success probabilities of every joint pure profile.

    `success[i]` has shape (M_1, ..., M_K); throughput is the policy rate times success.
    """

    success: np.ndarray  # (K, M_1, ..., M_K)
    policy_rates: Tuple[np.ndarray, ...]

    @property
    def num_users(self) -> int:
        return self.success.shape[0]

    @property
    def throughput(self) -> np.ndarray:
        K = self.num_users
        return np.stack([self.success[i] * _along(self.policy_rates[i], i, K) for i in range(K)])

    def values(self, utility: Utility = "success") -> np.ndarray:
        return self.success if utility == "success" else self.throughput

    def at(self, profile: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        nu = self.success[(slice(None), *profile)]
        tau = np.array([nu[i] * self.policy_rates[i][profile[i]] for i in range(self.num_users)])
        return nu.copy(), tau

    def success_vector(self, strategies, user: int) -> np.ndarray:
        """nu_user(a_user, Phi_-user) for every own policy, by contracting the tensor."""
        phis = _strategy_arrays(strategies)
        T = self.success[user]
        for j in reversed(range(self.num_users)):
            if j != user:
                T = np.tensordot(T, phis[j], axes=([j], [0]))
        return T


class MacGame:
    """Game built from a scenario: policy spaces, ACK tables and the utility tensor."""

    def __init__(self, scenario: Scenario, scenario_id: str = "scenario", materialize: Optional[bool] = None):
        self.scenario = scenario
        self.scenario_id = scenario_id
        self.num_users = scenario.num_users
        self.spaces: List[PolicySpace] = [policy_space(scenario, i) for i in range(self.num_users)]
        self.max_rates = np.array([scenario.max_rate(i) for i in range(self.num_users)])
        self._own_design = [self._design_matrix(space, with_rate=True) for space in self.spaces]
        self._other_design = [self._design_matrix(space, with_rate=False) for space in self.spaces]
        self._ack_tables = [self._build_ack_table(i) for i in range(self.num_users)]
        self._flat_tables = [table.reshape([S * C for S, C in zip(table.shape[0::2], table.shape[1::2])]).astype(float) for table in self._ack_tables]
        self.tensor: Optional[UtilityTensor] = None
        if materialize or (materialize is None and self.joint_size <= config.tensor_cap):
            self.tensor = self._build_tensor()

    # Construction

    @property
    def sizes(self) -> List[int]:
        return [len(space) for space in self.spaces]

    @property
    def joint_size(self) -> int:
        return math.prod(self.sizes)

    @staticmethod
    def _design_matrix(space: PolicySpace, with_rate: bool) -> np.ndarray:
        """Row a holds Pr(s) at column (s, code_a(s)); code includes the rate when `with_rate`."""
        M, S = space.levels.shape
        width = space.num_levels * (space.num_rates if with_rate else 1)
        codes = space.levels * space.num_rates + space.rate_index[:, None] if with_rate else space.levels
        X = np.zeros((M, S * width))
        rows = np.repeat(np.arange(M), S)
        cols = (np.arange(S)[None, :] * width + codes).ravel()
        X[rows, cols] = np.tile(space.state_probs, M)
        return X

    def _build_ack_table(self, user: int) -> np.ndarray:
        """ACK indicator of `user`, shaped (S_1, C_1, ..., S_K, C_K).

        C_j is user j's number of power levels, except for `user` itself where the
        code runs over (power level, rate) pairs.
        """
        sc, K = self.scenario, self.num_users
        ndim = 2 * K
        shape = tuple(space.num_states for space in self.spaces) + tuple(space.num_levels for space in self.spaces)
        h = np.stack([np.broadcast_to(_along(sc.state_bob_gains(k), k, ndim), shape) for k in range(K)], axis=-1)
        p = np.stack([np.broadcast_to(_along(self.spaces[k].grid, K + k, ndim), shape) for k in range(K)], axis=-1)
        rates = self.spaces[user].rate_values

        if sc.csi_mode == "eve_distribution_only":
            gains, probs = eve_lattice(sc)
            margins = secrecy_margins(h, p, gains)[..., user]  # (..., E)
            outage = np.stack([exact_masked_sum(r > margins, probs) for r in rates], axis=-1)
            ack = outage < sc.outage_threshold
        else:
            capacity = bob_rates(h, p)[..., user]
            if sc.csi_mode == "full_eve_csi":
                g = np.stack([np.broadcast_to(_along(sc.state_eve_gains(k), k, ndim), shape) for k in range(K)], axis=-1)
                capacity = np.maximum(0.0, capacity - eve_rates(g, p)[..., user])
            ack = rates <= capacity[..., None]

        order = []
        for j in range(K):
            order += [j, K + j] + ([ndim] if j == user else [])
        ack = np.ascontiguousarray(ack.transpose(order))
        merged = []
        for j, space in enumerate(self.spaces):
            merged += [space.num_states, space.num_levels * (space.num_rates if j == user else 1)]
        return ack.reshape(merged)

    def _build_tensor(self) -> UtilityTensor:
        success = []
        for i in range(self.num_users):
            T = self._flat_tables[i]
            for j in range(self.num_users):
                design = self._own_design[j] if j == i else self._other_design[j]
                T = np.tensordot(T, design, axes=([0], [1]))
            success.append(T)
        return UtilityTensor(success=np.stack(success), policy_rates=tuple(space.rates for space in self.spaces))

    def require_tensor(self, cap: Optional[int] = None) -> UtilityTensor:
        """The materialized tensor, built on demand within `cap`.

        Raises:
            TooLargeError: If the joint policy count exceeds `cap`.
        """
        cap = config.certify_cap if cap is None else cap
        if self.tensor is None:
            if self.joint_size > cap:
                raise TooLargeError(self.joint_size, cap)
            self.tensor = self._build_tensor()
        return self.tensor

    # Utilities

    def _contract_opponents(self, user: int, marginals: Sequence[np.ndarray]) -> np.ndarray:
        T = self._flat_tables[user]
        for j in reversed(range(self.num_users)):
            if j != user:
                T = np.tensordot(T, marginals[j], axes=([j], [0]))
        return T

    def success_vector(self, strategies, user: int) -> np.ndarray:
        """nu_user(a, Phi_-user) for every own policy a."""
        phis = _strategy_arrays(strategies)
        marginals = [phi @ X if j != user else None for j, (phi, X) in enumerate(zip(phis, self._other_design))]
        return self._own_design[user] @ self._contract_opponents(user, marginals)

    def throughput_vector(self, strategies, user: int) -> np.ndarray:
        return self.success_vector(strategies, user) * self.spaces[user].rates

    def utility_vector(self, strategies, user: int, utility: Utility = "success") -> np.ndarray:
        if utility == "success":
            return self.success_vector(strategies, user)
        return self.throughput_vector(strategies, user)

    def cost_vector(self, strategies, user: int, utility: Utility = "success") -> np.ndarray:
        """Expected cost in [0, 1] of every own policy against the others' strategies."""
        if utility == "success":
            return 1.0 - self.success_vector(strategies, user)
        return 1.0 - self.throughput_vector(strategies, user) / self.max_rates[user]

    def utilities(self, profile: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        """Exact (nu, tau) of a pure profile; tensor lookup when materialized."""
        profile = tuple(int(a) for a in profile)
        if self.tensor is not None:
            return self.tensor.at(profile)
        marginals = [X[a] for X, a in zip(self._other_design, profile)]
        nu = np.array([self._own_design[i][profile[i]] @ self._contract_opponents(i, marginals) for i in range(self.num_users)])
        tau = np.array([nu[i] * self.spaces[i].rates[profile[i]] for i in range(self.num_users)])
        return nu, tau

    def profile_utilities(self, profile: Sequence[int], utility: Utility = "success") -> np.ndarray:
        nu, tau = self.utilities(profile)
        return nu if utility == "success" else tau

    # Sampling

    def sample_acks(self, strategies, horizon: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """Play `horizon` i.i.d. slots: draw policies and channel states, apply the ACK rule.

        Returns:
            Tuple of ACK indicators (T, K) and the rates used (T, K).
        """
        phis = _strategy_arrays(strategies)
        drawn = [rng.choice(len(space), size=horizon, p=phi) for space, phi in zip(self.spaces, phis)]
        states = [rng.choice(space.num_states, size=horizon, p=space.state_probs) for space in self.spaces]
        levels = [space.levels[a, s] for space, a, s in zip(self.spaces, drawn, states)]
        acks = np.empty((horizon, self.num_users), dtype=bool)
        for i, table in enumerate(self._ack_tables):
            index = []
            for j, space in enumerate(self.spaces):
                code = levels[j] * space.num_rates + space.rate_index[drawn[j]] if j == i else levels[j]
                index += [states[j], code]
            acks[:, i] = table[tuple(index)]
        rates = np.stack([space.rates[a] for space, a in zip(self.spaces, drawn)], axis=1)
        return acks, rates


def expected_utility(game: MacGame, profile: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """Exact per-user success probability and throughput of a pure profile."""
    return game.utilities(profile)


def mixed_utility(game: MacGame, strategies, user: int, utility: Utility = "success") -> float:
    """Expected utility of `user` when every user plays its mixed strategy."""
    phis = _strategy_arrays(strategies)
    return float(phis[user] @ game.utility_vector(phis, user, utility))


def expected_cost_vector(game: MacGame, strategies, user: int, utility: Utility = "success") -> np.ndarray:
    """Expected normalized cost of each of `user`'s policies against the others' strategies."""
    return game.cost_vector(strategies, user, utility)
