"""Bundled scenarios and sweep specs, addressable by id or by path."""

from pathlib import Path
from typing import List, Tuple, Union

from ..Channel.models import Scenario
from ..utils import ScenarioValidationError
from .models import SweepSpec

SCENARIO_DIR = Path(__file__).parent / "scenarios"
SWEEP_DIR = Path(__file__).parent / "sweeps"


def list_scenarios() -> List[str]:
    return sorted(path.stem for path in SCENARIO_DIR.glob("*.json"))


def _resolve(reference: Union[str, Path], directory: Path, kind: str) -> Path:
    path = Path(reference)
    if path.is_file():
        return path
    bundled = directory / f"{reference}.json"
    if bundled.is_file():
        return bundled
    known = ", ".join(sorted(p.stem for p in directory.glob("*.json")))
    raise ScenarioValidationError(kind, f"'{reference}' is neither a file nor a bundled {kind} ({known})")


def load_scenario(reference: Union[str, Path]) -> Tuple[str, Scenario]:
    """Load a bundled scenario by id (e.g. `fmac-fixed`) or a scenario JSON file.

    Returns:
        Tuple of the scenario id (file stem) and the validated Scenario.
    """
    path = _resolve(reference, SCENARIO_DIR, "scenario")
    return path.stem, Scenario.from_json_file(path)


def load_sweep_spec(reference: Union[str, Path]) -> SweepSpec:
    return SweepSpec.from_json_file(_resolve(reference, SWEEP_DIR, "sweep"))
