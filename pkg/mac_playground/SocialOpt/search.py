"""Stochastic local search over pure profiles for Pareto points and the Nash bargaining solution."""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from tqdm import tqdm

from ..Channel.models import StrategyProfile
from ..config import config
from ..GameEngine.game import MacGame
from ..utils import announce
from .heuristics import ordering_mask, state_rank
from .models import SearchConfig, SearchResult


class ObjectiveEvaluator:
    """Scores profiles under a SearchConfig, exactly or over a sampled window.

    Profiles are ranked by (objective, sum of utilities) so that, among profiles with
    the same Nash product, the one with more total utility is kept.
    """

    def __init__(self, game: MacGame, search: SearchConfig, rng: np.random.Generator):
        self.game = game
        self.search = search
        self.rng = rng
        self.gammas = np.array(search.gammas(game.num_users))
        self.delta = None if search.disagreement is None else np.array(search.disagreement.values)
        self.evaluations = 0
        self._cache: Dict[Tuple[int, ...], np.ndarray] = {}

    def exact_values(self, profile: Tuple[int, ...]) -> np.ndarray:
        if profile not in self._cache:
            self._cache[profile] = self.game.profile_utilities(profile, self.search.utility)
        return self._cache[profile]

    def values(self, profile: Tuple[int, ...]) -> np.ndarray:
        self.evaluations += 1
        if self.search.evaluation == "exact":
            return self.exact_values(profile)
        acks, rates = self.game.sample_acks(StrategyProfile.pure(self.game.sizes, profile), self.search.window, self.rng)
        observed = acks if self.search.utility == "success" else acks * rates
        return observed.mean(axis=0)

    def objective(self, values: np.ndarray) -> float:
        if self.search.objective == "weighted_sum":
            return float(self.gammas @ values)
        if np.any(values < self.delta):
            return -math.inf
        return float(np.prod(values - self.delta))

    def score(self, values: np.ndarray) -> Tuple[float, Tuple[float, float]]:
        """The objective, which alone decides acceptance, and the rank used to keep the best profile."""
        objective = self.objective(values)
        if self.search.objective == "weighted_sum" or objective == -math.inf:
            return objective, (objective, 0.0)
        return objective, (objective, float(values.sum()))


class _Proposer:
    """Per-user policy proposals of experimenting users."""

    def __init__(self, game: MacGame, explore: float, rng: np.random.Generator):
        self.game = game
        self.explore = explore
        self.rng = rng
        self.consistent = [ordering_mask(space, state_rank(game.scenario, i)) for i, space in enumerate(game.spaces)]
        self.tried: List[Set[int]] = [set() for _ in game.spaces]

    def reset(self) -> None:
        for tried in self.tried:
            tried.clear()

    def _uniform_other(self, user: int, current: int) -> int:
        size = self.game.sizes[user]
        choice = int(self.rng.integers(size - 1))
        return choice + 1 if choice >= current else choice

    def propose(self, user: int, current: int) -> int:
        """A policy different from `current`, or `current` itself when the user has no other."""
        space = self.game.spaces[user]
        if len(space) == 1:
            return current
        if self.rng.random() < self.explore:
            return self._uniform_other(user, current)

        untried = np.ones(len(space), dtype=bool)
        untried[current] = False
        untried[list(self.tried[user])] = False
        pool = np.flatnonzero(untried & self.consistent[user])
        if pool.size == 0:
            pool = np.flatnonzero(untried)
        if pool.size == 0:
            return self._uniform_other(user, current)
        distance = (space.levels[pool] != space.levels[current]).sum(axis=1) + (space.rate_index[pool] != space.rate_index[current])
        # argmin keeps the first, i.e. lowest enumeration index, among ties
        return int(pool[np.argmin(distance)])

    def reject(self, user: int, policy: int) -> None:
        self.tried[user].add(policy)


def _random_profile(game: MacGame, rng: np.random.Generator) -> Tuple[int, ...]:
    return tuple(int(rng.integers(size)) for size in game.sizes)


def _initial_profile(game: MacGame, search: SearchConfig, rng: np.random.Generator) -> Tuple[int, ...]:
    if search.initial_profile is None:
        return _random_profile(game, rng)
    profile = tuple(search.initial_profile)
    if len(profile) != game.num_users or any(not 0 <= a < size for a, size in zip(profile, game.sizes)):
        raise ValueError(f"initial profile {list(profile)} does not index the policy spaces {game.sizes}")
    return profile


def local_search(game: MacGame, search: SearchConfig) -> SearchResult:
    """Stochastic local search maximizing a weighted sum or a Nash product of utilities.

    A climb starts from a uniformly random profile (or `initial_profile`). Every epoch
    each user experiments with probability rho_i. An experimenting user proposes, with
    probability `explore`, a uniformly random other policy and otherwise the nearest
    untried policy that gives more probable states more power. The joint candidate
    replaces the current profile only if its objective strictly exceeds the benchmark.
    After `patience` consecutive rejections the climb restarts: a fresh random profile
    becomes current and its objective the new benchmark.

    The best profile over all climbs is kept, ranked by objective and, among equal
    Nash products, by total utility; earlier profiles win exact ties.

    Returns:
        SearchResult with the best profile seen and its exact objective.
    """
    K = game.num_users
    rhos = np.array(search.rhos(K))
    rng = np.random.default_rng(search.seed)
    evaluator = ObjectiveEvaluator(game, search, rng)
    proposer = _Proposer(game, search.explore, rng)

    current = _initial_profile(game, search, rng)
    benchmark, rank = evaluator.score(evaluator.values(current))
    best, best_rank = current, rank
    trace = [{"epoch": 0, "objective": benchmark, "benchmark": benchmark, "best": benchmark, "accepted": True, "restart": True, "experimenting_users": ""}]
    rejections = restarts = 0

    for epoch in tqdm(range(1, search.max_epochs + 1), desc="Local search", disable=not config.verbose, leave=False):
        if rejections >= search.patience:
            current = _random_profile(game, rng)
            benchmark, rank = evaluator.score(evaluator.values(current))
            if rank > best_rank:
                best, best_rank = current, rank
            proposer.reset()
            rejections = 0
            restarts += 1
            trace.append({"epoch": epoch, "objective": benchmark, "benchmark": benchmark, "best": best_rank[0], "accepted": False, "restart": True, "experimenting_users": ";".join(map(str, range(K)))})
            continue

        experimenting = [i for i in range(K) if rng.random() < rhos[i]]
        proposal = list(current)
        for i in experimenting:
            proposal[i] = proposer.propose(i, current[i])
        candidate = tuple(proposal)
        if candidate == current:
            trace.append({"epoch": epoch, "objective": benchmark, "benchmark": benchmark, "best": best_rank[0], "accepted": False, "restart": False, "experimenting_users": ";".join(map(str, experimenting))})
            continue

        objective, rank = evaluator.score(evaluator.values(candidate))
        if rank > best_rank:
            best, best_rank = candidate, rank
        accepted = objective > benchmark
        if accepted:
            current, benchmark = candidate, objective
            proposer.reset()
            rejections = 0
        else:
            for i in experimenting:
                if candidate[i] != current[i]:
                    proposer.reject(i, candidate[i])
            rejections += 1
        trace.append({"epoch": epoch, "objective": objective, "benchmark": benchmark, "best": best_rank[0], "accepted": accepted, "restart": False, "experimenting_users": ";".join(map(str, experimenting))})

    exact = evaluator.exact_values(best)
    success, throughput = game.utilities(best)
    return SearchResult(
        profile=list(best),
        objective=evaluator.objective(exact),
        values=[float(v) for v in exact],
        success=[float(v) for v in success],
        throughput=[float(v) for v in throughput],
        epochs=search.max_epochs,
        evaluations=evaluator.evaluations,
        restarts=restarts,
        seed=search.seed,
        trace=trace,
    )


def multi_start_search(game: MacGame, search: SearchConfig, starts: int = 4, max_workers: Optional[int] = None) -> SearchResult:
    """Best of `starts` independent searches seeded seed, seed + 1, ...

    Only the first run starts from `initial_profile`. Runs share the game read-only;
    with `max_workers` > 1 they execute on a thread pool. Ties keep the lowest seed.
    """
    if starts < 1:
        raise ValueError(f"starts must be at least 1, got {starts}")
    max_workers = config.max_workers if max_workers is None else max_workers
    configs = [search.model_copy(update={"seed": search.seed + k, "initial_profile": search.initial_profile if k == 0 else None}) for k in range(starts)]
    announce(f"Running {starts} local searches ({search.objective}) on {game.scenario_id}", "🚀")
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(lambda c: local_search(game, c), configs))
    else:
        results = [local_search(game, c) for c in configs]

    best = results[0]
    for result in results[1:]:
        if (result.objective, sum(result.values)) > (best.objective, sum(best.values)):
            best = result
    announce(f"Best objective {best.objective:.6g} from seed {best.seed}", "✅")
    return best
