"""Exhaustive certificates for Pareto optimality and the Nash bargaining solution."""

from typing import Optional, Sequence

import numpy as np

from ..config import config
from ..GameEngine.game import MacGame, Utility
from ..utils import EmptyBargainingSetError
from .models import DisagreementPoint, NbsCertificate, ParetoCertificate

MAX_REPORTED_TIES = 20


def certify_pareto(game: MacGame, profile: Sequence[int], utility: Utility = "success", cap: Optional[int] = None) -> ParetoCertificate:
    """Scan every pure profile for one that weakly improves all users and strictly improves one.

    Raises:
        TooLargeError: If the joint profile count exceeds `cap` (default `config.certify_cap`).
    """
    values = game.require_tensor(cap).values(utility)
    profile = [int(a) for a in profile]
    own = values[(slice(None), *profile)]
    tol = config.certify_tol
    shape = (-1,) + (1,) * (values.ndim - 1)
    weakly = np.all(values >= own.reshape(shape) - tol, axis=0)
    strictly = np.any(values > own.reshape(shape) + tol, axis=0)
    dominators = np.argwhere(weakly & strictly)
    if dominators.shape[0] == 0:
        return ParetoCertificate(profile=profile, is_pareto=True)
    dominator = [int(a) for a in dominators[0]]
    return ParetoCertificate(
        profile=profile,
        is_pareto=False,
        dominator=dominator,
        dominator_values=[float(v) for v in values[(slice(None), *dominator)]],
    )


def nash_products(values: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """prod_i (v_i - delta_i) over all profiles; -inf where some v_i < delta_i."""
    shape = (-1,) + (1,) * (values.ndim - 1)
    excess = values - delta.reshape(shape)
    inside = np.all(excess >= -config.certify_tol, axis=0)
    return np.where(inside, np.prod(np.clip(excess, 0.0, None), axis=0), -np.inf)


def certify_nbs(game: MacGame, profile: Sequence[int], disagreement: DisagreementPoint, utility: Optional[Utility] = None, cap: Optional[int] = None) -> NbsCertificate:
    """Check that `profile` maximizes the Nash product over profiles dominating the disagreement point.

    Args:
        game: Game to scan.
        profile: Candidate profile.
        disagreement: Disagreement values delta.
        utility: Bargaining utility; defaults to the disagreement point's own.
        cap: Size guard, default `config.certify_cap`.

    Returns:
        NbsCertificate with the gap to the best product and any tied maximizers.

    Raises:
        TooLargeError: If the joint profile count exceeds the cap.
        EmptyBargainingSetError: If no profile gives every user at least delta_i.
    """
    utility = disagreement.utility if utility is None else utility
    values = game.require_tensor(cap).values(utility)
    products = nash_products(values, np.asarray(disagreement.values, dtype=float))
    best = float(products.max())
    if best == -np.inf:
        raise EmptyBargainingSetError(disagreement.values)

    profile = [int(a) for a in profile]
    product = float(products[tuple(profile)])
    tied = np.argwhere(products >= best - config.certify_tol)
    best_profile = [int(a) for a in tied[0]]
    return NbsCertificate(
        profile=profile,
        is_nbs=product >= best - config.certify_tol,
        product=product,
        best_product=best,
        gap=best - product,
        best_profile=best_profile,
        ties=[[int(a) for a in row] for row in tied[1 : 1 + MAX_REPORTED_TIES]],
    )
