"""
Multiplicative-weights learning of epsilon-coarse correlated equilibria.

Example:
    ```python
    from mac_playground.MW import mw_run, verify_cce

    result = mw_run(game, eps_mw=0.1, regret_target=0.05, max_iters=10_000)
    check = verify_cce(game, result, eps=0.05)
    ```
"""

from .learner import REGRET_COLUMNS, CceResult, LearnerState, default_learning_rate, mw_run
from .regret import CceVerification, RegretHistory, cost_history, external_regret, verify_cce

__all__ = [
    # Learning
    "mw_run",
    "LearnerState",
    "CceResult",
    "default_learning_rate",
    "REGRET_COLUMNS",
    # Regret
    "RegretHistory",
    "external_regret",
    "cost_history",
    "verify_cce",
    "CceVerification",
]
