"""
Discrete fading MAC / MAC-WT instances and their feasible pure-policy spaces.

Example:
    ```python
    from mac_playground.Channel import Scenario, enumerate_feasible_policies

    scenario = Scenario.from_json_file("fmac-fixed.json")
    policies = enumerate_feasible_policies(scenario, user=0)
    ```
"""

from .models import PowerPolicy, Scenario, StrategyProfile
from .policies import PolicySpace, enumerate_feasible_policies, policy_average_power, policy_space

__all__ = [
    # Core models
    "Scenario",
    "PowerPolicy",
    "StrategyProfile",
    # Enumeration
    "PolicySpace",
    "policy_space",
    "enumerate_feasible_policies",
    "policy_average_power",
]
