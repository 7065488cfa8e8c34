import itertools
import math

import numpy as np
import pytest
from conftest import make_scenario, single_policy_game, three_state_scenario
from pydantic import ValidationError

from mac_playground.Channel import Scenario, policy_space
from mac_playground.GameEngine import MacGame, expected_utility
from mac_playground.Harness import load_scenario
from mac_playground.SocialOpt import DisagreementPoint, SearchConfig, certify_nbs, certify_pareto, disagreement_point, heuristic_action, local_search, multi_start_search, ordering_mask, state_rank
from mac_playground.utils import EmptyBargainingSetError, TooLargeError


def single_user(pmf, gains, grid, budget) -> Scenario:
    return Scenario.model_validate({"num_users": 1, "bob_gains": [gains], "bob_pmf": [pmf], "power_grid": [grid], "power_budget": [budget], "fixed_rate": [1.0]})


def accepted_moves(trace):
    """(benchmark before, objective) of every accepted move that is not a restart."""
    return [(before["benchmark"], row["objective"]) for before, row in zip(trace, trace[1:]) if row["accepted"] and not row["restart"]]


class TestHeuristic:
    def test_uniform_states_ordered_by_gain(self):
        policy = heuristic_action(three_state_scenario(budget=100.0), 0)
        assert policy.assignment == {0.1: 20.0, 0.5: 50.0, 0.9: 100.0}
        assert policy.rate == 1.0

    def test_most_probable_state_gets_high_power(self):
        policy = heuristic_action(single_user([0.7, 0.3], [0.1, 0.9], [1.0, 10.0], 8.0), 0)
        assert policy.powers == [10.0, 1.0]

    def test_pair_states_rank(self):
        scenario = make_scenario(csi_mode="full_eve_csi", eve_gains=[[0.05, 0.8], [0.05, 0.8]], eve_pmf=[[0.5, 0.5], [0.5, 0.5]])
        assert state_rank(scenario, 0).tolist() == [2, 3, 0, 1]

    def test_lowest_rate_in_multi_rate_mode(self):
        scenario = make_scenario(rate_mode="multi", rate_set=[[0.5, 1.0, 2.0], [0.5, 1.0, 2.0]], fixed_rate=[])
        assert heuristic_action(scenario, 1).rate == 0.5

    @pytest.mark.parametrize("budget", [1.0, 1.5, 2.2, 3.0, 3.9, 4.6, 5.5, 6.8, 8.0, 10.0])
    def test_projection_matches_exhaustive_search(self, budget):
        grid = [1.0, 3.0, 6.0, 10.0]
        probs = [0.6, 0.4]
        policy = heuristic_action(single_user(probs, [0.2, 0.7], grid, budget), 0)

        # the more probable state 0 targets the top level, state 1 the one below
        candidates = [
            (l0, l1)
            for l0, l1 in itertools.product(range(4), repeat=2)
            if l0 <= 3 and l1 <= 2 and l0 >= l1 and probs[0] * grid[l0] + probs[1] * grid[l1] <= budget + 1e-12
        ]
        best = max(candidates)
        assert policy.powers == [grid[best[0]], grid[best[1]]]

    def test_ordering_mask(self, small_scenario):
        space = policy_space(small_scenario, 0)
        mask = ordering_mask(space, state_rank(small_scenario, 0))
        expected = [levels[1] >= levels[0] for levels in space.levels]
        assert mask.tolist() == expected


class TestDisagreementPoint:
    def test_exact_mode_is_expected_utility(self, three_state_game):
        delta = disagreement_point(three_state_game)
        nu, _ = expected_utility(three_state_game, delta.profile)
        assert delta.values == pytest.approx(nu.tolist())
        assert delta.mode == "exact"

    def test_sampled_mode_within_four_sigma(self, three_state_game):
        exact = np.array(disagreement_point(three_state_game).values)
        n = 100_000
        sampled = np.array(disagreement_point(three_state_game, horizon=n, seed=3, mode="sampled").values)
        sigma = np.sqrt(np.maximum(exact * (1 - exact), 1e-12) / n)
        assert np.all(np.abs(sampled - exact) <= 4 * sigma + 1e-12)

    def test_all_ack(self, small_scenario):
        game = MacGame(small_scenario.model_copy(update={"fixed_rate": [1e-9, 1e-9]}))
        assert disagreement_point(game).values == [1.0, 1.0]
        assert disagreement_point(game, horizon=500, mode="sampled").values == [1.0, 1.0]

    def test_throughput_values(self, small_game):
        delta = disagreement_point(small_game, utility="throughput")
        _, tau = expected_utility(small_game, delta.profile)
        assert delta.values == pytest.approx(tau.tolist())


class TestSearchConfig:
    def test_nash_needs_disagreement(self):
        with pytest.raises(ValidationError):
            SearchConfig(objective="nash_product")

    @pytest.mark.parametrize("kwargs", [{"experiment_prob": 0.0}, {"experiment_prob": [0.5, 1.5]}, {"weights": [1.0, -1.0]}, {"explore": 1.5}, {"window": 0}])
    def test_rejects_invalid_parameters(self, kwargs):
        with pytest.raises(ValidationError):
            SearchConfig(**kwargs)


class TestLocalSearch:
    def test_single_user_two_policies(self, two_policy_game):
        result = local_search(two_policy_game, SearchConfig(experiment_prob=1.0, max_epochs=2))
        assert result.profile == [1]
        assert result.objective == 1.0

    def test_matches_exhaustive_maximum(self, small_game):
        total = small_game.tensor.success.sum(axis=0)
        best = total.max()
        hits = 0
        for seed in range(100):
            result = local_search(small_game, SearchConfig(seed=seed, max_epochs=1000))
            if abs(result.objective - best) <= 1e-12:
                hits += 1
                assert certify_pareto(small_game, result.profile).is_pareto
        assert hits >= 95

    def test_nash_product_matches_certifier(self, small_game):
        delta = disagreement_point(small_game)
        hits = 0
        for seed in range(100):
            result = local_search(small_game, SearchConfig(objective="nash_product", disagreement=delta, seed=seed, max_epochs=1000))
            if certify_nbs(small_game, result.profile, delta).is_nbs:
                hits += 1
                assert certify_pareto(small_game, result.profile).is_pareto
        assert hits >= 95

    def test_nash_never_accepts_outside_bargaining_set(self, three_state_game):
        delta = disagreement_point(three_state_game)
        result = local_search(three_state_game, SearchConfig(objective="nash_product", disagreement=delta, seed=1, max_epochs=500))
        accepted = [row for row in result.trace if row["accepted"] and row["epoch"] > 0]
        assert all(row["objective"] > -math.inf for row in accepted)
        if result.objective > -math.inf:
            assert all(v >= d - 1e-12 for v, d in zip(result.values, delta.values))

    def test_benchmark_strictly_increases_within_a_climb(self, three_state_game):
        result = local_search(three_state_game, SearchConfig(seed=5, max_epochs=800, patience=30, weights=[1.0, 2.0]))
        moves = accepted_moves(result.trace)
        assert moves
        assert all(new > old for old, new in moves)
        assert result.restarts == sum(row["restart"] for row in result.trace[1:])
        assert result.restarts > 0

    def test_nash_benchmark_strictly_increases_within_a_climb(self, three_state_game):
        delta = disagreement_point(three_state_game)
        result = local_search(three_state_game, SearchConfig(objective="nash_product", disagreement=delta, seed=3, max_epochs=800, patience=30))
        assert all(new > old for old, new in accepted_moves(result.trace))

    def test_restart_moves_the_climb(self, three_state_game):
        result = local_search(three_state_game, SearchConfig(seed=2, max_epochs=400, patience=10))
        restarts = [row for row in result.trace[1:] if row["restart"]]
        assert restarts
        for row in restarts:
            assert row["benchmark"] == row["objective"]
            assert not row["accepted"]

    def test_returns_best_profile_seen(self, three_state_game):
        result = local_search(three_state_game, SearchConfig(seed=4, max_epochs=600, patience=15))
        best = [row["best"] for row in result.trace]
        assert all(b >= a for a, b in zip(best, best[1:]))
        assert best[-1] == max(row["objective"] for row in result.trace)
        assert result.objective == pytest.approx(best[-1])

    def test_initial_profile(self, three_state_game):
        total = three_state_game.tensor.success.sum(axis=0)
        top = [int(a) for a in np.unravel_index(int(np.argmax(total)), total.shape)]
        result = local_search(three_state_game, SearchConfig(initial_profile=top, max_epochs=5))
        assert result.trace[0]["objective"] == pytest.approx(total.max())
        assert result.objective == pytest.approx(total.max())
        with pytest.raises(ValueError):
            local_search(three_state_game, SearchConfig(initial_profile=[0, 10**6], max_epochs=5))

    def test_deterministic_per_seed(self, three_state_game):
        search = SearchConfig(seed=9, max_epochs=300)
        assert local_search(three_state_game, search).trace == local_search(three_state_game, search).trace

    def test_sampled_evaluation_reports_exact_objective(self, small_game):
        result = local_search(small_game, SearchConfig(evaluation="sampled", window=200, seed=2, max_epochs=200))
        nu, _ = expected_utility(small_game, result.profile)
        assert result.objective == pytest.approx(float(nu.sum()))
        assert result.trace_frame().columns.tolist() == ["epoch", "objective", "benchmark", "best", "accepted", "restart", "experimenting_users"]

    def test_multi_start(self, three_state_game):
        search = SearchConfig(seed=0, max_epochs=300, utility="throughput")
        best = multi_start_search(three_state_game, search, starts=3, max_workers=1)
        singles = [local_search(three_state_game, search.model_copy(update={"seed": s})) for s in range(3)]
        assert best.objective == max(r.objective for r in singles)
        threaded = multi_start_search(three_state_game, search, starts=3, max_workers=2)
        assert threaded.profile == best.profile


class TestCertifiers:
    def test_single_profile_is_pareto(self):
        assert certify_pareto(single_policy_game(), [0, 0]).is_pareto

    def test_dominated_profile(self, two_policy_game):
        certificate = certify_pareto(two_policy_game, [0])
        assert not certificate.is_pareto
        assert certificate.dominator == [1]
        assert certificate.dominator_values == [1.0]

    @pytest.mark.parametrize("weights", [(1.0, 1.0), (0.3, 2.0), (5.0, 0.1)])
    def test_weighted_sum_maximizer_is_pareto(self, three_state_game, weights):
        success = three_state_game.tensor.success
        objective = weights[0] * success[0] + weights[1] * success[1]
        profile = list(np.unravel_index(int(np.argmax(objective)), objective.shape))
        assert certify_pareto(three_state_game, profile).is_pareto

    def test_zero_disagreement_maximizes_product(self, small_game):
        delta = DisagreementPoint(profile=[0, 0], values=[0.0, 0.0])
        product = small_game.tensor.success.prod(axis=0)
        best = list(np.unravel_index(int(np.argmax(product)), product.shape))
        certificate = certify_nbs(small_game, best, delta)
        assert certificate.is_nbs
        assert certificate.best_product == pytest.approx(product.max())
        assert product[tuple(certificate.best_profile)] == pytest.approx(product.max())

    def test_single_bargaining_profile(self, two_policy_game):
        delta = DisagreementPoint(profile=[1], values=[1.0])
        assert certify_nbs(two_policy_game, [1], delta).is_nbs
        outside = certify_nbs(two_policy_game, [0], delta)
        assert not outside.is_nbs
        assert outside.product == -math.inf

    def test_empty_bargaining_set(self, small_scenario):
        game = MacGame(small_scenario.model_copy(update={"fixed_rate": [10.0, 10.0]}))
        with pytest.raises(EmptyBargainingSetError):
            certify_nbs(game, [0, 0], DisagreementPoint(profile=[0, 0], values=[0.5, 0.5]))

    def test_size_guard(self, small_scenario):
        game = MacGame(small_scenario, materialize=False)
        with pytest.raises(TooLargeError):
            certify_pareto(game, [0, 0], cap=1)
        with pytest.raises(TooLargeError):
            certify_nbs(game, [0, 0], DisagreementPoint(profile=[0, 0], values=[0.0, 0.0]), cap=1)


class TestBundledInstance:
    """fmac-fixed at budget 35: 121 policies per user, 14641 profiles."""

    @pytest.fixture(scope="class")
    def game(self):
        scenario_id, scenario = load_scenario("fmac-fixed")
        game = MacGame(scenario.with_budget(35.0), scenario_id)
        assert game.sizes == [121, 121]
        return game

    def test_weighted_sum_reaches_exhaustive_maximum(self, game):
        best = game.tensor.success.sum(axis=0).max()
        hits = 0
        for seed in range(100):
            result = local_search(game, SearchConfig(seed=seed))
            if abs(result.objective - best) <= 1e-12:
                hits += 1
                assert certify_pareto(game, result.profile).is_pareto
        assert hits >= 95

    def test_nash_product_reaches_certified_maximum(self, game):
        delta = disagreement_point(game)
        hits = 0
        for seed in range(100):
            result = local_search(game, SearchConfig(objective="nash_product", disagreement=delta, seed=seed))
            assert certify_pareto(game, result.profile).is_pareto
            if certify_nbs(game, result.profile, delta).is_nbs:
                hits += 1
        assert hits >= 95
