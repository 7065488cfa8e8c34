"""The algorithms compared by the harness, each reduced to a RunReport."""

import time
from typing import Callable, Dict, List, Optional

import numpy as np

from ..Channel.models import PowerPolicy
from ..GameEngine.game import MacGame
from ..GameEngine.models import RunReport
from ..MW.learner import CceResult, mw_run
from ..SocialOpt.heuristics import disagreement_point
from ..SocialOpt.models import DisagreementPoint, SearchConfig, SearchResult
from ..SocialOpt.search import local_search, multi_start_search
from .models import BaselineResult, SweepSpec

# Per-round strategies are kept only while sum(M_i) * max_iters stays below this
HISTORY_LIMIT = 5 * 10**6


def global_baseline(game: MacGame, cap: Optional[int] = None) -> BaselineResult:
    """Exhaustive maximization of the sum throughput over all joint pure profiles.

    Ties go to the lexicographically first profile.

    Raises:
        TooLargeError: If the joint profile count exceeds `cap` (default `config.certify_cap`).
    """
    tensor = game.require_tensor(cap)
    total = tensor.throughput.sum(axis=0)
    profile = [int(a) for a in np.unravel_index(int(np.argmax(total)), total.shape)]
    success, throughput = tensor.at(profile)
    return BaselineResult(
        profile=profile,
        sum_throughput=float(total[tuple(profile)]),
        success=[float(v) for v in success],
        throughput=[float(v) for v in throughput],
    )


def cce_report(game: MacGame, result: CceResult, budget: Optional[float] = None) -> RunReport:
    return RunReport.build(
        game.scenario_id,
        "cce",
        result.avg_success,
        result.avg_throughput,
        seed=result.seed,
        utility=result.utility,
        wall_clock=result.wall_clock,
        budget=budget,
        converged=result.converged,
        details={"rounds": result.rounds, "eps_mw": result.eps_mw, "max_regret": float(result.regrets.max())},
        regret_trace=result.regret_frame().to_dict("records"),
    )


def search_report(game: MacGame, algorithm: str, result: SearchResult, utility: str, budget: Optional[float] = None, disagreement: Optional[DisagreementPoint] = None, wall_clock: float = 0.0) -> RunReport:
    details = {"objective": result.objective, "restarts": result.restarts, "evaluations": result.evaluations}
    if disagreement is not None:
        details.update({f"delta_{i}": v for i, v in enumerate(disagreement.values)})
    return RunReport.build(
        game.scenario_id,
        algorithm,
        result.success,
        result.throughput,
        seed=result.seed,
        utility=utility,
        wall_clock=wall_clock,
        budget=budget,
        profile=result.profile,
        details=details,
        objective_trace=result.trace,
    )


def run_search(game: MacGame, search: SearchConfig, starts: int) -> SearchResult:
    return local_search(game, search) if starts == 1 else multi_start_search(game, search, starts)


def run_cce(game: MacGame, spec: SweepSpec, seed: int, budget: Optional[float] = None) -> RunReport:
    result = mw_run(
        game,
        eps_mw=spec.mw_eps,
        regret_target=spec.regret_target,
        max_iters=spec.max_iters,
        seed=seed,
        bandit=spec.bandit,
        utility=spec.utility,
        keep_history=sum(game.sizes) * spec.max_iters <= HISTORY_LIMIT,
    )
    return cce_report(game, result, budget)


def carry_profile(game: MacGame, policies: Optional[List[PowerPolicy]]) -> Optional[List[int]]:
    """Indices of `policies` in the policy spaces of `game`, or None if any of them is infeasible there."""
    if policies is None or len(policies) != game.num_users:
        return None
    profile = [space.locate(policy) for space, policy in zip(game.spaces, policies)]
    return None if None in profile else profile


def run_pareto(game: MacGame, spec: SweepSpec, seed: int, budget: Optional[float] = None, initial_profile: Optional[List[int]] = None) -> RunReport:
    started = time.perf_counter()
    search = SearchConfig(objective="weighted_sum", weights=spec.gamma, utility=spec.utility, max_epochs=spec.search_epochs, patience=spec.patience, seed=seed, initial_profile=initial_profile)
    result = run_search(game, search, spec.starts)
    return search_report(game, "pp", result, spec.utility, budget, wall_clock=time.perf_counter() - started)


def run_nbs(game: MacGame, spec: SweepSpec, seed: int, budget: Optional[float] = None) -> RunReport:
    started = time.perf_counter()
    delta = disagreement_point(game, spec.disagreement_horizon, seed, spec.disagreement_mode, spec.utility)
    search = SearchConfig(objective="nash_product", disagreement=delta, utility=spec.utility, max_epochs=spec.search_epochs, patience=spec.patience, seed=seed)
    result = run_search(game, search, spec.starts)
    return search_report(game, "nbs", result, spec.utility, budget, delta, wall_clock=time.perf_counter() - started)


def run_global_baseline(game: MacGame, spec: SweepSpec, seed: int, budget: Optional[float] = None) -> RunReport:
    started = time.perf_counter()
    best = global_baseline(game)
    return RunReport.build(game.scenario_id, "global_baseline", best.success, best.throughput, seed=seed, utility="throughput", wall_clock=time.perf_counter() - started, budget=budget, profile=best.profile)


def run_disagreement_only(game: MacGame, spec: SweepSpec, seed: int, budget: Optional[float] = None) -> RunReport:
    delta = disagreement_point(game, utility=spec.utility)
    success, throughput = game.utilities(delta.profile)
    return RunReport.build(game.scenario_id, "disagreement_only", success, throughput, seed=seed, utility=spec.utility, budget=budget, profile=delta.profile)


RUNNERS: Dict[str, Callable[..., RunReport]] = {
    "cce": run_cce,
    "pp": run_pareto,
    "nbs": run_nbs,
    "global_baseline": run_global_baseline,
    "disagreement_only": run_disagreement_only,
}


def run_algorithm(algorithm: str, game: MacGame, spec: SweepSpec, seed: int, budget: Optional[float] = None) -> RunReport:
    if algorithm not in RUNNERS:
        raise ValueError(f"Unknown algorithm '{algorithm}', expected one of {sorted(RUNNERS)}")
    return RUNNERS[algorithm](game, spec, seed, budget)
