"""Receiver ACK/NACK rules: plain decoding, secrecy with Eve's CSI, and secrecy outage."""

import math
from typing import Sequence, Tuple

import numpy as np

from ..Channel.models import Scenario
from ..utils import ModeMismatchError
from .models import JointRealization
from .rates import bob_rates, eve_rates


def ack_no_security(realization: JointRealization) -> np.ndarray:
    """ACK for every user whose rate does not exceed its successive-cancellation rate."""
    h, _, p, r = realization.arrays()
    return r <= bob_rates(h, p)


def ack_full_eve_csi(realization: JointRealization) -> np.ndarray:
    """ACK for every user whose rate does not exceed its secrecy rate (C_b - C_e)^+."""
    h, g, p, r = realization.arrays()
    if g is None:
        raise ModeMismatchError(("full_eve_csi",), "no_eve")
    return r <= np.maximum(0.0, bob_rates(h, p) - eve_rates(g, p))


def eve_lattice(scenario: Scenario) -> Tuple[np.ndarray, np.ndarray]:
    """All joint Eve-gain states with their product probabilities.

    Returns:
        Tuple of gains (E, K) and probabilities (E,), states in lexicographic order.
    """
    sizes = [len(gains) for gains in scenario.eve_gains]
    index = np.indices(sizes).reshape(len(sizes), -1).T
    gains = np.stack([np.asarray(scenario.eve_gains[k], dtype=float)[index[:, k]] for k in range(len(sizes))], axis=1)
    probs = np.ones(index.shape[0])
    for k in range(len(sizes)):
        probs = probs * np.asarray(scenario.eve_pmf[k], dtype=float)[index[:, k]]
    return gains, probs


def secrecy_margins(bob_gains: np.ndarray, powers: np.ndarray, eve_gains: np.ndarray) -> np.ndarray:
    """C_b - C_e for every user at every Eve state.

    Args:
        bob_gains: (..., K) receiver gains.
        powers: (..., K) transmit powers.
        eve_gains: (E, K) Eve gains of the lattice.

    Returns:
        Array of shape (..., E, K).
    """
    bob = bob_rates(bob_gains, powers)[..., None, :]
    eve = eve_rates(eve_gains, np.asarray(powers, dtype=float)[..., None, :])
    return bob - eve


def exact_masked_sum(mask: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """Correctly rounded sum of `probs` where `mask` holds, over the last axis."""
    flat = mask.reshape(-1, mask.shape[-1])
    totals = np.fromiter((math.fsum(probs[row]) for row in flat), dtype=float, count=flat.shape[0])
    return totals.reshape(mask.shape[:-1])


def _require_outage_mode(scenario: Scenario) -> None:
    if scenario.csi_mode != "eve_distribution_only":
        raise ModeMismatchError(("eve_distribution_only",), scenario.csi_mode)


def secrecy_outage_prob(scenario: Scenario, bob_gains: Sequence[float], powers: Sequence[float], rates: Sequence[float], user: int) -> float:
    """Probability over Eve's gains that `user`'s rate exceeds its instantaneous secrecy rate.

    Bob's gains and all transmit powers are held fixed; all M^K Eve states are enumerated.

    Raises:
        ModeMismatchError: If the scenario is not in eve_distribution_only mode.
    """
    _require_outage_mode(scenario)
    gains, probs = eve_lattice(scenario)
    margins = secrecy_margins(np.asarray(bob_gains, dtype=float), np.asarray(powers, dtype=float), gains)
    return float(exact_masked_sum(rates[user] > margins[:, user], probs))


def ack_outage(scenario: Scenario, realization: JointRealization) -> np.ndarray:
    """ACK for every user whose secrecy-outage probability is strictly below the threshold.

    Eve gains in the realization, if any, are ignored.
    """
    _require_outage_mode(scenario)
    h, _, p, r = realization.arrays()
    gains, probs = eve_lattice(scenario)
    margins = secrecy_margins(h, p, gains)  # (E, K)
    outage = exact_masked_sum((r[None, :] > margins).T, probs)
    return outage < scenario.outage_threshold
