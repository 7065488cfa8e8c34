"""Successive-cancellation rates at the receiver and interference-limited rates at Eve.

Rates are 1/2 log2(1 + SINR) in bits per channel use, with unit noise variance at
both receivers. The vectorized helpers take arrays whose last axis runs over users
and return one rate per user (not per decoding position).
"""

from typing import Tuple

import numpy as np

from ..utils import ModeMismatchError
from .models import JointRealization


def decode_order(bob_gains) -> Tuple[int, ...]:
    """Users in decoding order: descending gain, ties by ascending user index."""
    gains = list(bob_gains)
    return tuple(sorted(range(len(gains)), key=lambda k: (-gains[k], k)))


def decoded_after(bob_gains: np.ndarray) -> np.ndarray:
    """Mask `after[..., k, j]`: user j is decoded after user k."""
    h_k = bob_gains[..., :, None]
    h_j = bob_gains[..., None, :]
    K = bob_gains.shape[-1]
    later_index = np.arange(K)[None, :] > np.arange(K)[:, None]
    return (h_j < h_k) | ((h_j == h_k) & later_index)


def bob_rates(bob_gains: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """Receiver rate of every user; interference only from users decoded later."""
    bob_gains = np.asarray(bob_gains, dtype=float)
    received = bob_gains * np.asarray(powers, dtype=float)
    interference = np.einsum("...kj,...j->...k", decoded_after(bob_gains).astype(float), received)
    return 0.5 * np.log2(1.0 + received / (1.0 + interference))


def eve_rates(eve_gains: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """Eve's rate for every user; Eve cancels nobody."""
    received = np.asarray(eve_gains, dtype=float) * np.asarray(powers, dtype=float)
    interference = received.sum(axis=-1, keepdims=True) - received
    return 0.5 * np.log2(1.0 + received / (1.0 + interference))


def bob_rate(realization: JointRealization, position: int) -> float:
    """Rate of the user at `position` (0-based) in the decoding order."""
    h, _, p, _ = realization.arrays()
    user = decode_order(realization.bob_gains)[position]
    return float(bob_rates(h, p)[user])


def eve_rate(realization: JointRealization, position: int) -> float:
    """Eve's rate for the user at `position` (0-based) in the receiver's decoding order."""
    h, g, p, _ = realization.arrays()
    if g is None:
        raise ModeMismatchError(("full_eve_csi", "eve_distribution_only"), "no_eve")
    user = decode_order(realization.bob_gains)[position]
    return float(eve_rates(g, p)[user])
