"""
Pareto points and the Nash bargaining solution by stochastic local search over pure profiles.

Example:
    ```python
    from mac_playground.SocialOpt import SearchConfig, certify_nbs, disagreement_point, local_search

    delta = disagreement_point(game)
    result = local_search(game, SearchConfig(objective="nash_product", disagreement=delta, seed=7))
    certificate = certify_nbs(game, result.profile, delta)
    ```
"""

from .certify import certify_nbs, certify_pareto, nash_products
from .heuristics import disagreement_point, heuristic_action, heuristic_index, ordering_mask, state_rank
from .models import DisagreementPoint, NbsCertificate, ParetoCertificate, SearchConfig, SearchResult
from .search import local_search, multi_start_search

__all__ = [
    # Models
    "SearchConfig",
    "SearchResult",
    "DisagreementPoint",
    "ParetoCertificate",
    "NbsCertificate",
    # Heuristic and disagreement point
    "heuristic_action",
    "heuristic_index",
    "state_rank",
    "ordering_mask",
    "disagreement_point",
    # Search
    "local_search",
    "multi_start_search",
    # Certificates
    "certify_pareto",
    "certify_nbs",
    "nash_products",
]
