from dataclasses import dataclass

import numpy as np

from .game import MacGame


@dataclass(frozen=True)
class SimulationResult:
    """Time averages of sampled play."""

    ack_frequency: np.ndarray  # (K,)
    throughput: np.ndarray  # (K,)
    horizon: int
    seed: int


def simulate_play(game: MacGame, strategies, horizon: int, seed: int = 0) -> SimulationResult:
    """Sample channel states and policy draws i.i.d. per slot and average the ACKs.

    Single-threaded and fully determined by `seed`.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    rng = np.random.default_rng(seed)
    acks, rates = game.sample_acks(strategies, horizon, rng)
    return SimulationResult(
        ack_frequency=acks.mean(axis=0),
        throughput=(acks * rates).mean(axis=0),
        horizon=horizon,
        seed=seed,
    )
