import dataclasses
import math

import numpy as np
import pytest
from conftest import single_policy_game, three_state_scenario

from mac_playground.GameEngine import MacGame
from mac_playground.Harness import list_scenarios, load_scenario
from mac_playground.MW import RegretHistory, default_learning_rate, external_regret, mw_run, verify_cce
from mac_playground.utils import NoConvergenceError


class TestExternalRegret:
    def test_best_action_always_played(self):
        history = RegretHistory(costs=[np.array([[0.0, 1.0], [0.0, 1.0]])], played=[np.array([0, 0])])
        assert external_regret(history, 0) == 0.0

    def test_alternating_equal_actions(self):
        history = RegretHistory(costs=[np.full((4, 2), 0.5)], played=[np.array([0, 1, 0, 1])])
        assert external_regret(history, 0) == 0.0

    def test_two_round_expansion(self):
        history = RegretHistory(costs=[np.array([[0.0, 1.0], [1.0, 0.0]])], played=[np.array([0, 1])])
        assert external_regret(history, 0) == pytest.approx(-0.5)

    def test_mixed_play(self):
        history = RegretHistory(costs=[np.array([[0.0, 1.0], [0.0, 1.0]])], played=[np.array([[0.5, 0.5], [0.5, 0.5]])])
        assert external_regret(history, 0) == pytest.approx(0.5)


class TestMwRun:
    def test_default_learning_rate(self):
        assert default_learning_rate([100, 10], 10_000) == pytest.approx(math.sqrt(math.log(100) / 10_000))
        assert default_learning_rate([2], 1) == 0.49
        assert default_learning_rate([1, 1], 10_000) == 1e-3

    def test_single_policy_converges_immediately(self):
        result = mw_run(single_policy_game(), eps_mw=0.1)
        assert result.converged
        assert result.rounds == 1
        assert result.regrets.tolist() == [0.0, 0.0]
        assert result.sample_profile(np.random.default_rng(0)) == [0, 0]

    def test_concentrates_on_zero_cost_policy(self, two_policy_game):
        eps = 0.1
        result = mw_run(two_policy_game, eps_mw=eps, regret_target=1e-12, max_iters=500)
        assert not result.converged
        assert result.strategies[0][-1, 1] > 0.99
        for t in result.checkpoints:
            assert result.regret_trace[t - 1, 0] <= eps + math.log(2) / (eps * t) + 1e-9

    def test_regret_bound_at_every_checkpoint(self, three_state_game):
        eps = 0.1
        result = mw_run(three_state_game, eps_mw=eps, regret_target=1e-12, max_iters=2000)
        for t in result.checkpoints:
            for i, size in enumerate(three_state_game.sizes):
                assert result.regret_trace[t - 1, i] <= eps + math.log(size) / (eps * t) + 1e-9
        for phis in result.strategies:
            np.testing.assert_allclose(phis.sum(axis=1), 1.0, atol=1e-12)
            assert np.all(phis > 0)

    def test_fixed_rate_scenario_reaches_target(self):
        game = MacGame(three_state_scenario(budget=20.0), "fmac-fixed")
        result = mw_run(game, regret_target=0.05, max_iters=10_000)
        assert result.converged
        assert np.all(result.regrets <= 0.05)

    def test_throughput_utility(self, small_scenario):
        scenario = small_scenario.model_copy(update={"rate_mode": "multi", "rate_set": [[0.2, 0.4], [0.2, 0.4]]})
        result = mw_run(MacGame(scenario), eps_mw=0.1, regret_target=0.05, max_iters=3000, utility="throughput")
        assert result.utility == "throughput"
        assert np.all(result.avg_throughput <= 0.4 + 1e-12)

    def test_deterministic(self, three_state_game):
        first = mw_run(three_state_game, eps_mw=0.2, regret_target=0.01, max_iters=300)
        second = mw_run(three_state_game, eps_mw=0.2, regret_target=0.01, max_iters=300)
        np.testing.assert_array_equal(first.regret_trace, second.regret_trace)
        for a, b in zip(first.strategies, second.strategies):
            np.testing.assert_array_equal(a, b)

    def test_bandit_is_seeded(self, three_state_game):
        first = mw_run(three_state_game, eps_mw=0.1, regret_target=1e-12, max_iters=200, seed=4, bandit=True)
        second = mw_run(three_state_game, eps_mw=0.1, regret_target=1e-12, max_iters=200, seed=4, bandit=True)
        np.testing.assert_array_equal(first.regret_trace, second.regret_trace)
        assert first.bandit
        for phis in first.strategies:
            np.testing.assert_allclose(phis.sum(axis=1), 1.0, atol=1e-12)

    def test_no_convergence_is_flagged(self, two_policy_game):
        result = mw_run(two_policy_game, eps_mw=0.1, regret_target=1e-6, max_iters=1)
        assert not result.converged
        assert result.regrets[0] == pytest.approx(0.5)
        with pytest.raises(NoConvergenceError) as info:
            result.raise_for_convergence()
        assert info.value.result is result

    def test_without_history(self, three_state_game):
        result = mw_run(three_state_game, eps_mw=0.1, max_iters=100, keep_history=False)
        assert result.strategies == []
        assert len(result.regret_frame()) == 2 * len(result.checkpoints)
        with pytest.raises(ValueError):
            verify_cce(three_state_game, result, 0.05)

    def test_sample_profile(self, two_policy_game):
        result = mw_run(two_policy_game, eps_mw=0.4, regret_target=0.05, max_iters=2000)
        rng = np.random.default_rng(0)
        draws = [result.sample_profile(rng)[0] for _ in range(2000)]
        assert set(draws) <= {0, 1}
        assert draws.count(1) > 1000

    @pytest.mark.parametrize("kwargs", [{"eps_mw": 0.5}, {"eps_mw": 0.0}, {"regret_target": 0.0}, {"max_iters": 0}])
    def test_rejects_bad_parameters(self, three_state_game, kwargs):
        with pytest.raises(ValueError):
            mw_run(three_state_game, **kwargs)

    def test_regret_frame(self, two_policy_game):
        result = mw_run(two_policy_game, eps_mw=0.1, regret_target=1e-12, max_iters=120)
        frame = result.regret_frame()
        assert list(frame.columns) == ["round", "user", "avg_regret", "avg_cost"]
        assert frame["round"].unique().tolist() == [1, 50, 100, 120]


class TestVerifyCce:
    def test_single_policy_game(self):
        game = single_policy_game()
        check = verify_cce(game, mw_run(game), 0.0)
        assert check.all_passed
        assert all(s >= 0 for s in check.slack)

    @pytest.mark.parametrize("seed", range(10))
    def test_converged_run_is_certified(self, three_state_game, seed):
        result = mw_run(three_state_game, regret_target=0.05, max_iters=10_000, seed=seed)
        assert result.converged
        check = verify_cce(three_state_game, result, 0.05)
        assert check.all_passed
        np.testing.assert_allclose(check.slack, -result.regrets, atol=1e-9)

    def test_factored_and_tensor_paths_agree(self, three_state_game):
        result = mw_run(three_state_game, eps_mw=0.1, regret_target=0.05, max_iters=500)
        with_tensor = verify_cce(three_state_game, result, 0.05, use_tensor=True)
        factored = verify_cce(three_state_game, result, 0.05, use_tensor=False)
        np.testing.assert_allclose(with_tensor.slack, factored.slack, atol=1e-12)

    def test_profitable_deviation_fails(self, two_policy_game):
        result = mw_run(two_policy_game, eps_mw=0.1, max_iters=1)
        stuck = dataclasses.replace(result, strategies=[np.array([[1.0, 0.0]])], rounds=1)
        check = verify_cce(two_policy_game, stuck, 0.5)
        assert check.passed == [False]
        assert check.slack == [pytest.approx(-1.0)]


class TestBundledScenarios:
    @pytest.mark.parametrize("scenario_id", list_scenarios())
    def test_regret_bound_at_every_checkpoint(self, scenario_id):
        game = MacGame(load_scenario(scenario_id)[1], scenario_id)
        result = mw_run(game, regret_target=1e-12, max_iters=10_000, keep_history=False)
        for t in result.checkpoints:
            for i, size in enumerate(game.sizes):
                assert result.regret_trace[t - 1, i] <= result.eps_mw + math.log(size) / (result.eps_mw * t) + 1e-9

    @pytest.mark.parametrize("scenario_id", list_scenarios())
    def test_verification_agrees_with_stopping_rule(self, scenario_id):
        game = MacGame(load_scenario(scenario_id)[1], scenario_id)
        result = mw_run(game, regret_target=0.05, max_iters=10_000)
        check = verify_cce(game, result, 0.05)
        assert check.all_passed == result.converged
        np.testing.assert_allclose(check.slack, -result.regrets, atol=1e-9)
