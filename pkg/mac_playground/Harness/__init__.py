"""
Experiment harness: bundled scenarios, algorithm runners, budget sweeps and the CLI.

Example:
    ```python
    from mac_playground.Harness import load_sweep_spec, run_sweep

    outcome = run_sweep(load_sweep_spec("fmac-fixed"), output_dir="results")
    print(outcome.findings)
    ```
"""

from .algorithms import RUNNERS, carry_profile, cce_report, global_baseline, run_algorithm, run_search, search_report
from .library import list_scenarios, load_scenario, load_sweep_spec
from .models import BaselineResult, SweepSpec
from .plots import write_gnuplot
from .sweep import SweepOutcome, TrendFinding, check_trends, reports_to_frames, run_sweep, write_sweep

__all__ = [
    # Library
    "list_scenarios",
    "load_scenario",
    "load_sweep_spec",
    # Models
    "SweepSpec",
    "BaselineResult",
    "SweepOutcome",
    "TrendFinding",
    # Algorithms
    "RUNNERS",
    "run_algorithm",
    "run_search",
    "global_baseline",
    "cce_report",
    "search_report",
    "carry_profile",
    # Sweeps
    "run_sweep",
    "check_trends",
    "reports_to_frames",
    "write_sweep",
    "write_gnuplot",
]
