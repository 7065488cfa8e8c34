from typing import Dict

import pytest

from mac_playground.Channel import Scenario
from mac_playground.config import config
from mac_playground.GameEngine import MacGame

THIRD = 0.3333333333333333
THREE_GAINS = [0.1, 0.5, 0.9]
WIDE_GRID = [1.0, 5.0, 10.0, 20.0, 50.0, 100.0]


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    """Silence status lines and progress bars, restoring config afterwards."""
    monkeypatch.setattr(config, "verbose", False)
    monkeypatch.setattr(config, "throughput_scale", 1.0)


def scenario_dict(**overrides) -> Dict:
    data = {
        "num_users": 2,
        "bob_gains": [[0.1, 0.9], [0.1, 0.9]],
        "bob_pmf": [[0.5, 0.5], [0.5, 0.5]],
        "power_grid": [[1.0, 5.0, 10.0], [1.0, 5.0, 10.0]],
        "power_budget": [6.0, 6.0],
        "rate_mode": "fixed",
        "fixed_rate": [1.0, 1.0],
        "csi_mode": "no_eve",
    }
    data.update(overrides)
    return data


def make_scenario(**overrides) -> Scenario:
    return Scenario.model_validate(scenario_dict(**overrides))


def three_state_scenario(budget: float = 20.0, **overrides) -> Scenario:
    """Two users, H={0.1,0.5,0.9} uniform, grid {1,5,10,20,50,100}, rate 1."""
    return make_scenario(
        bob_gains=[THREE_GAINS, THREE_GAINS],
        bob_pmf=[[THIRD] * 3, [THIRD] * 3],
        power_grid=[WIDE_GRID, WIDE_GRID],
        power_budget=[budget, budget],
        **overrides,
    )


def two_policy_scenario() -> Scenario:
    """One user, one state, powers {0, 100}: policy 0 always fails, policy 1 always succeeds."""
    return Scenario.model_validate(
        {
            "num_users": 1,
            "bob_gains": [[0.9]],
            "bob_pmf": [[1.0]],
            "power_grid": [[0.0, 100.0]],
            "power_budget": [100.0],
            "fixed_rate": [1.0],
        }
    )


@pytest.fixture
def small_scenario() -> Scenario:
    """Two users, two equiprobable states, six feasible policies each."""
    return make_scenario()


@pytest.fixture
def small_game(small_scenario) -> MacGame:
    return MacGame(small_scenario, "small")


@pytest.fixture
def two_policy_game() -> MacGame:
    return MacGame(two_policy_scenario(), "two-policy")


@pytest.fixture
def three_state_game() -> MacGame:
    """Three-state scenario at budget 5 (eleven feasible policies per user)."""
    return MacGame(three_state_scenario(budget=5.0), "three-state-5")


def single_policy_game() -> MacGame:
    """Two users with exactly one feasible policy each."""
    scenario = Scenario.model_validate(
        {
            "num_users": 2,
            "bob_gains": [[0.5], [0.9]],
            "bob_pmf": [[1.0], [1.0]],
            "power_grid": [[1.0], [1.0]],
            "power_budget": [1.0, 1.0],
            "fixed_rate": [0.1, 0.1],
        }
    )
    return MacGame(scenario, "single-policy")
