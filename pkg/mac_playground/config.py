"""Configuration settings shared by every mac_playground subpackage."""

import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() not in {"0", "false", "no", "off", ""}


@dataclass
class PlaygroundConfig:
    """Cross-cutting settings for the simulator, the solvers and the harness."""

    # Output
    output_dir: str = field(default_factory=lambda: os.getenv("MAC_PLAYGROUND_OUT", "./results"))

    # Size guards
    tensor_cap: int = field(default_factory=lambda: int(os.getenv("MAC_PLAYGROUND_TENSOR_CAP", str(10**7))))
    certify_cap: int = field(default_factory=lambda: int(os.getenv("MAC_PLAYGROUND_CERTIFY_CAP", str(10**7))))
    enumeration_cap: int = 10**8  # raw maps per user before the budget filter

    # Numerical tolerances
    feasibility_tol: float = 1e-12
    pmf_tol: float = 1e-12
    certify_tol: float = 1e-9

    # Learning
    regret_check_every: int = 50

    # Execution
    max_workers: int = field(default_factory=lambda: int(os.getenv("MAC_PLAYGROUND_WORKERS", "1")))

    # Reporting
    throughput_scale: float = field(default_factory=lambda: float(os.getenv("MAC_PLAYGROUND_KAPPA", "1.0")))
    verbose: bool = field(default_factory=lambda: _env_flag("MAC_PLAYGROUND_VERBOSE", True))

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.tensor_cap < 1:
            raise ValueError(f"MAC_PLAYGROUND_TENSOR_CAP must be positive, got {self.tensor_cap}")
        if self.certify_cap < 1:
            raise ValueError(f"MAC_PLAYGROUND_CERTIFY_CAP must be positive, got {self.certify_cap}")
        if self.max_workers < 1:
            raise ValueError(f"MAC_PLAYGROUND_WORKERS must be at least 1, got {self.max_workers}")
        if not 0.0 < self.throughput_scale <= 1.0:
            raise ValueError(f"MAC_PLAYGROUND_KAPPA must lie in (0, 1], got {self.throughput_scale}")
        if self.regret_check_every < 1:
            raise ValueError("regret_check_every must be at least 1")


# Create default configuration instance
config = PlaygroundConfig()
