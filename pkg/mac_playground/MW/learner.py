"""Multiplicative-weights no-regret dynamics run by all users simultaneously."""

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..Channel.models import StrategyProfile
from ..config import config
from ..GameEngine.game import MacGame, Utility
from ..utils import NoConvergenceError, announce

REGRET_COLUMNS = ["round", "user", "avg_regret", "avg_cost"]


def default_learning_rate(sizes: List[int], max_iters: int) -> float:
    """sqrt(ln(max M_i) / max_iters) clamped to [1e-3, 0.49].

    The floor keeps the rate positive when every user has a single policy (ln 1 = 0);
    the cap keeps it strictly below 1/2.
    """
    eps = math.sqrt(math.log(max(sizes)) / max_iters)
    return min(0.49, max(1e-3, eps))


@dataclass
class LearnerState:
    """Weights and regret bookkeeping of every user.

    Weights are kept in log form so they stay strictly positive over long runs.
    """

    log_weights: List[np.ndarray]
    eps_mw: float
    t: int = 0
    cumulative_cost: np.ndarray = None  # (K,) expected cost of the played strategies
    counterfactual_cost: List[np.ndarray] = None  # per policy

    def __post_init__(self):
        K = len(self.log_weights)
        if self.cumulative_cost is None:
            self.cumulative_cost = np.zeros(K)
        if self.counterfactual_cost is None:
            self.counterfactual_cost = [np.zeros_like(w) for w in self.log_weights]

    @classmethod
    def initial(cls, sizes: List[int], eps_mw: float) -> "LearnerState":
        return cls(log_weights=[np.zeros(size) for size in sizes], eps_mw=eps_mw)

    @property
    def weights(self) -> List[np.ndarray]:
        return [np.exp(w - w.max()) for w in self.log_weights]

    @property
    def strategies(self) -> List[np.ndarray]:
        return [w / w.sum() for w in self.weights]

    def record(self, strategies: List[np.ndarray], costs: List[np.ndarray]) -> None:
        self.t += 1
        for i, (phi, cost) in enumerate(zip(strategies, costs)):
            self.cumulative_cost[i] += float(phi @ cost)
            self.counterfactual_cost[i] += cost

    def update(self, user: int, costs: np.ndarray, mask: Optional[np.ndarray] = None) -> None:
        """w <- w (1 - eps)^cost, restricted to `mask` when given."""
        step = costs * math.log1p(-self.eps_mw)
        if mask is not None:
            step = np.where(mask, step, 0.0)
        self.log_weights[user] = self.log_weights[user] + step

    @property
    def regrets(self) -> np.ndarray:
        """Average external regret of every user against its best fixed policy."""
        return np.array([(c - cf.min()) / self.t for c, cf in zip(self.cumulative_cost, self.counterfactual_cost)])

    @property
    def average_costs(self) -> np.ndarray:
        return self.cumulative_cost / self.t


@dataclass
class CceResult:
    """Time-averaged outcome psi = (1/T) sum_t prod_i Phi_i^(t), kept as a mixture of products."""

    strategies: List[np.ndarray]  # per user, (T, M_i): round-t mixed strategy
    regrets: np.ndarray  # (K,) final average external regret
    rounds: int
    converged: bool
    regret_target: float
    eps_mw: float
    seed: int
    bandit: bool
    utility: Utility
    regret_trace: np.ndarray  # (T, K)
    cost_trace: np.ndarray  # (T, K)
    checkpoints: List[int]
    avg_success: np.ndarray  # (K,) psi-average success probability
    avg_throughput: np.ndarray  # (K,)
    wall_clock: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def num_users(self) -> int:
        return len(self.regrets)

    def profile(self, t: int) -> StrategyProfile:
        """The product strategy profile played at round t (0-based)."""
        return StrategyProfile(strategies=[s[t] for s in self.strategies])

    def sample_profile(self, rng: np.random.Generator) -> List[int]:
        """Draw a joint pure profile from psi."""
        t = int(rng.integers(self.rounds))
        return [int(rng.choice(s.shape[1], p=s[t])) for s in self.strategies]

    def raise_for_convergence(self) -> "CceResult":
        if not self.converged:
            raise NoConvergenceError(self)
        return self

    def regret_frame(self) -> pd.DataFrame:
        """Regret trace rows at every stopping checkpoint."""
        rows = [
            {"round": t, "user": i, "avg_regret": self.regret_trace[t - 1, i], "avg_cost": self.cost_trace[t - 1, i]}
            for t in self.checkpoints
            for i in range(self.num_users)
        ]
        return pd.DataFrame(rows, columns=REGRET_COLUMNS)


def _bandit_costs(game: MacGame, strategies: List[np.ndarray], rng: np.random.Generator, utility: Utility):
    """Sample one slot; every user observes only its own ACK for the policy it played."""
    played = [int(rng.choice(len(phi), p=phi)) for phi in strategies]
    acks, rates = game.sample_acks(StrategyProfile.pure(game.sizes, played), 1, rng)
    if utility == "success":
        costs = 1.0 - acks[0].astype(float)
    else:
        costs = 1.0 - acks[0] * rates[0] / game.max_rates
    return played, costs


def mw_run(
    game: MacGame,
    eps_mw: Optional[float] = None,
    regret_target: float = 0.05,
    max_iters: int = 10_000,
    seed: int = 0,
    bandit: bool = False,
    utility: Utility = "success",
    keep_history: bool = True,
) -> CceResult:
    """Run multiplicative weights for all users until every average regret is within target.

    Each round, every user computes its expected cost vector against the others' current
    mixed strategies (or, with `bandit`, observes the cost of its sampled policy only),
    multiplies its weights by (1 - eps_mw)^cost and renormalizes. The stopping rule is
    checked every `config.regret_check_every` rounds (and after the first round).
    With `keep_history=False` the per-round strategies are not stored (saves T x sum M_i
    floats) and the result cannot be verified or sampled.

    Returns:
        CceResult flagged `converged=False` when `max_iters` is reached first; call
        `raise_for_convergence()` to turn that into NoConvergenceError.
    """
    if max_iters < 1:
        raise ValueError(f"max_iters must be at least 1, got {max_iters}")
    if regret_target <= 0:
        raise ValueError(f"regret_target must be positive, got {regret_target}")
    sizes = game.sizes
    eps_mw = default_learning_rate(sizes, max_iters) if eps_mw is None else eps_mw
    if not 0.0 < eps_mw < 0.5:
        raise ValueError(f"eps_mw must lie in (0, 1/2), got {eps_mw}")

    K = game.num_users
    rng = np.random.default_rng(seed)
    state = LearnerState.initial(sizes, eps_mw)
    history: List[List[np.ndarray]] = [[] for _ in sizes]
    regret_trace = np.empty((max_iters, K))
    cost_trace = np.empty((max_iters, K))
    success_sum = np.zeros(K)
    throughput_sum = np.zeros(K)
    checkpoints: List[int] = []
    converged = False
    started = time.perf_counter()

    announce(f"Running multiplicative weights on {game.scenario_id} ({'bandit' if bandit else 'full information'}, eps_mw={eps_mw:.4g})", "🚀")
    for t in tqdm(range(1, max_iters + 1), desc="MW rounds", disable=not config.verbose, leave=False):
        strategies = state.strategies
        successes = [game.success_vector(strategies, i) for i in range(K)]
        if utility == "success":
            costs = [1.0 - s for s in successes]
        else:
            costs = [1.0 - s * space.rates / game.max_rates[i] for i, (s, space) in enumerate(zip(successes, game.spaces))]

        for i in range(K):
            if keep_history:
                history[i].append(strategies[i])
            success_sum[i] += float(strategies[i] @ successes[i])
            throughput_sum[i] += float(strategies[i] @ (successes[i] * game.spaces[i].rates))
        state.record(strategies, costs)
        regret_trace[t - 1] = state.regrets
        cost_trace[t - 1] = state.average_costs

        if t == 1 or t % config.regret_check_every == 0 or t == max_iters:
            checkpoints.append(t)
            if np.all(regret_trace[t - 1] <= regret_target):
                converged = True
                break

        if bandit:
            played, observed = _bandit_costs(game, strategies, rng, utility)
            for i in range(K):
                mask = np.zeros(sizes[i], dtype=bool)
                mask[played[i]] = True
                state.update(i, np.full(sizes[i], observed[i]), mask)
        else:
            for i in range(K):
                state.update(i, costs[i])

    T = state.t
    result = CceResult(
        strategies=[np.array(h) for h in history] if keep_history else [],
        regrets=state.regrets,
        rounds=T,
        converged=converged,
        regret_target=regret_target,
        eps_mw=eps_mw,
        seed=seed,
        bandit=bandit,
        utility=utility,
        regret_trace=regret_trace[:T].copy(),
        cost_trace=cost_trace[:T].copy(),
        checkpoints=checkpoints,
        avg_success=success_sum / T,
        avg_throughput=throughput_sum / T,
        wall_clock=time.perf_counter() - started,
    )
    if converged:
        announce(f"Regret below {regret_target} after {T} rounds", "✅")
    else:
        announce(f"No convergence after {T} rounds, regrets {np.round(result.regrets, 4).tolist()}", "⚠️")
    return result
