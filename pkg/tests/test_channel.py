import itertools

import numpy as np
import pytest
from conftest import THIRD, make_scenario, scenario_dict
from pydantic import ValidationError

from mac_playground.Channel import PowerPolicy, Scenario, StrategyProfile, enumerate_feasible_policies, policy_average_power, policy_space
from mac_playground.utils import EmptyFeasibleSetError, ScenarioValidationError


def single_user(gains, pmf, grid, budget, **extra) -> Scenario:
    return Scenario.model_validate({"num_users": 1, "bob_gains": [gains], "bob_pmf": [pmf], "power_grid": [grid], "power_budget": [budget], "fixed_rate": [1.0], **extra})


class TestEnumeration:
    def test_single_state_all_maps_feasible(self):
        policies = enumerate_feasible_policies(single_user([0.5], [1.0], [1.0, 5.0], 5.0), 0)
        assert [p.powers for p in policies] == [[1.0], [5.0]]

    def test_budget_excludes_expensive_map(self):
        policies = enumerate_feasible_policies(single_user([0.1, 0.9], [0.5, 0.5], [1.0, 5.0], 3.0), 0)
        assert [tuple(p.powers) for p in policies] == [(1.0, 1.0), (1.0, 5.0), (5.0, 1.0)]

    def test_non_binding_budget_keeps_every_map(self):
        grid = [float(level) for level in range(26)]
        scenario = single_user([0.1, 0.5, 0.9], [THIRD] * 3, grid, 25.0)
        assert len(policy_space(scenario, 0)) == 26**3

    def test_multi_rate_is_rate_major(self):
        scenario = single_user([0.1, 0.9], [0.5, 0.5], [1.0, 5.0], 3.0, rate_mode="multi", rate_set=[[0.5, 1.0]], fixed_rate=[])
        policies = enumerate_feasible_policies(scenario, 0)
        assert len(policies) == 6
        assert [p.rate for p in policies] == [0.5, 0.5, 0.5, 1.0, 1.0, 1.0]
        assert [tuple(p.powers) for p in policies[:3]] == [tuple(p.powers) for p in policies[3:]]

    def test_full_eve_csi_states_are_pairs(self):
        scenario = make_scenario(csi_mode="full_eve_csi", eve_gains=[[0.05, 0.8], [0.05, 0.8]], eve_pmf=[[0.5, 0.5], [0.5, 0.5]], power_grid=[[1.0, 5.0], [1.0, 5.0]], power_budget=[5.0, 5.0])
        space = policy_space(scenario, 0)
        assert space.states == [(0.1, 0.05), (0.1, 0.8), (0.9, 0.05), (0.9, 0.8)]
        assert len(space) == 2**4
        np.testing.assert_allclose(space.state_probs, [0.25] * 4)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_brute_force_filter(self, seed):
        rng = np.random.default_rng(seed)
        num_states = int(rng.integers(1, 4))
        grid = sorted(rng.choice(np.arange(0, 20), size=int(rng.integers(1, 5)), replace=False).astype(float).tolist())
        probs = rng.dirichlet(np.ones(num_states))
        probs[-1] = 1.0 - probs[:-1].sum()
        budget = float(rng.uniform(min(grid), max(grid)))
        gains = sorted(rng.uniform(0, 1, size=num_states).tolist())
        scenario = single_user(gains, probs.tolist(), grid, budget)

        expected = [powers for powers in itertools.product(grid, repeat=num_states) if float(np.dot(probs, powers)) <= budget + 1e-12]
        policies = enumerate_feasible_policies(scenario, 0)
        assert [tuple(p.powers) for p in policies] == expected
        assert all(policy_average_power(p, scenario) <= budget + 1e-12 for p in policies)

    def test_enumeration_is_deterministic(self, small_scenario):
        assert enumerate_feasible_policies(small_scenario, 1) == enumerate_feasible_policies(small_scenario, 1)

    def test_locate_across_budgets(self, small_scenario):
        small = policy_space(small_scenario, 0)
        large = policy_space(small_scenario.with_budget(10.0), 0)
        for a in range(len(small)):
            policy = small.policy(a)
            assert large.policy(large.locate(policy)).powers == policy.powers
        assert small.locate(large.policy(len(large) - 1)) is None

    def test_empty_feasible_set(self):
        with pytest.raises(EmptyFeasibleSetError) as info:
            policy_space(single_user([0.5], [1.0], [1.0, 5.0], 0.5), 0)
        assert info.value.min_average == 1.0


class TestAveragePower:
    def test_constant_policy(self, small_scenario):
        policy = PowerPolicy(user=0, index=0, state_space=[0.1, 0.9], powers=[5.0, 5.0], rate=1.0)
        assert policy_average_power(policy, small_scenario) == pytest.approx(5.0)

    def test_weighted_states(self):
        scenario = single_user([0.1, 0.9], [0.25, 0.75], [4.0, 8.0], 8.0)
        policy = PowerPolicy(user=0, index=0, state_space=[0.1, 0.9], powers=[4.0, 8.0], rate=1.0)
        assert policy_average_power(policy, scenario) == pytest.approx(7.0)

    def test_pair_states_constant(self):
        scenario = make_scenario(csi_mode="full_eve_csi", eve_gains=[[0.05, 0.8], [0.05, 0.8]], eve_pmf=[[0.3, 0.7], [0.3, 0.7]])
        states = scenario.states(0)
        policy = PowerPolicy(user=0, index=0, state_space=states, powers=[3.0] * len(states), rate=1.0)
        assert policy_average_power(policy, scenario) == pytest.approx(3.0)


class TestScenarioValidation:
    def test_pmf_must_sum_to_one(self):
        with pytest.raises(ScenarioValidationError) as info:
            Scenario.from_dict(scenario_dict(bob_pmf=[[0.5, 0.4], [0.5, 0.5]]))
        assert info.value.field == "bob_pmf[0]"

    def test_unknown_key_rejected(self):
        with pytest.raises(ScenarioValidationError) as info:
            Scenario.from_dict(scenario_dict(noise=1.0))
        assert info.value.field == "noise"

    def test_grid_strictly_increasing(self):
        with pytest.raises(ScenarioValidationError) as info:
            Scenario.from_dict(scenario_dict(power_grid=[[1.0, 1.0], [1.0, 5.0]]))
        assert info.value.field == "power_grid[0]"

    def test_eve_alphabet_required_with_eve(self):
        with pytest.raises(ScenarioValidationError) as info:
            Scenario.from_dict(scenario_dict(csi_mode="full_eve_csi"))
        assert info.value.field == "eve_gains"

    def test_outage_threshold_required(self):
        with pytest.raises(ScenarioValidationError) as info:
            Scenario.from_dict(scenario_dict(csi_mode="eve_distribution_only", eve_gains=[[0.1], [0.1]], eve_pmf=[[1.0], [1.0]]))
        assert info.value.field == "outage_threshold"

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ScenarioValidationError):
            Scenario.from_json_file(path)

    def test_with_budget_caps_grid(self, small_scenario):
        scaled = small_scenario.with_budget(2.0, grid_cap_multiple=2.0)
        assert scaled.power_budget == [2.0, 2.0]
        assert scaled.power_grid == [[1.0], [1.0]]
        assert small_scenario.with_budget(4.0).power_grid == small_scenario.power_grid


class TestStrategyProfile:
    def test_pure_and_uniform(self):
        assert StrategyProfile.pure([3, 2], [2, 0])[0].tolist() == [0.0, 0.0, 1.0]
        assert StrategyProfile.uniform([4])[0].tolist() == [0.25] * 4

    def test_rejects_non_pmf(self):
        with pytest.raises(ValidationError):
            StrategyProfile(strategies=[[0.5, 0.4]])
        with pytest.raises(ValidationError):
            StrategyProfile(strategies=[[1.5, -0.5]])
