from typing import Sequence

import numpy as np


def jain_index(values: Sequence[float]) -> float:
    """Jain's fairness index (sum x)^2 / (K sum x^2); 1 for the all-zero vector."""
    x = np.asarray(values, dtype=float)
    if np.any(x < 0):
        raise ValueError("Jain's index is defined for nonnegative values")
    squares = float(np.sum(x**2))
    if squares == 0.0:
        return 1.0
    return float(np.sum(x) ** 2 / (x.size * squares))
