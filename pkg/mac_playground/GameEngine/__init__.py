"""
Game engine: exact expected utilities by joint-state enumeration, mixed-strategy
utilities, normalized cost vectors, sampled play and reporting metrics.

Example:
    ```python
    from mac_playground.GameEngine import MacGame, expected_utility

    game = MacGame(scenario, scenario_id="fmac-fixed")
    nu, tau = expected_utility(game, [0, 0])
    ```
"""

from .game import MacGame, Utility, UtilityTensor, expected_cost_vector, expected_utility, mixed_utility
from .metrics import jain_index
from .models import REPORT_COLUMNS, RunReport
from .simulate import SimulationResult, simulate_play

__all__ = [
    # Game
    "MacGame",
    "UtilityTensor",
    "Utility",
    "expected_utility",
    "mixed_utility",
    "expected_cost_vector",
    # Simulation
    "simulate_play",
    "SimulationResult",
    # Reporting
    "jain_index",
    "RunReport",
    "REPORT_COLUMNS",
]
