"""Exceptions and small helpers shared across the package."""

from typing import Any, Sequence

from .config import config


class MacPlaygroundError(Exception):
    """Base class of every domain error raised by mac_playground."""


class ScenarioValidationError(MacPlaygroundError):
    """Raised when a scenario or sweep spec file violates its schema or invariants."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class EmptyFeasibleSetError(MacPlaygroundError):
    """Raised when no power map of a user satisfies its average-power budget."""

    def __init__(self, user: int, budget: float, min_average: float):
        self.user = user
        self.budget = budget
        self.min_average = min_average
        super().__init__(f"User {user} has no feasible policy: budget {budget} is below the minimum average power {min_average}")


class ModeMismatchError(MacPlaygroundError):
    """Raised when an operation is called under the wrong CSI mode."""

    def __init__(self, expected: Sequence[str], actual: str):
        self.expected = tuple(expected)
        self.actual = actual
        super().__init__(f"Operation requires csi_mode in {self.expected}, scenario has '{actual}'")


class NoConvergenceError(MacPlaygroundError):
    """Raised when a learner stops at its iteration limit with regret above target."""

    def __init__(self, result: Any):
        self.result = result
        regrets = ", ".join(f"{r:.4g}" for r in result.regrets)
        super().__init__(f"No convergence after {result.rounds} rounds: regrets [{regrets}] above target {result.regret_target}")


class TooLargeError(MacPlaygroundError):
    """Raised when an exhaustive computation exceeds its size guard."""

    def __init__(self, size: int, cap: int, what: str = "joint policy space"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} has {size} entries, above the cap of {cap}")


class EmptyBargainingSetError(MacPlaygroundError):
    """Raised when no profile gives every user at least its disagreement value."""

    def __init__(self, disagreement: Sequence[float]):
        self.disagreement = list(disagreement)
        super().__init__(f"No pure profile dominates the disagreement point {self.disagreement}")


def announce(message: str, marker: str = "📊", force: bool = False) -> None:
    """Print a status line when verbose output is enabled."""
    if config.verbose or force:
        print(f"\n{marker} {message}")
