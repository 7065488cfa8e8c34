"""Budget sweeps: every algorithm at every budget, written as CSV and gnuplot data."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

import pandas as pd
from tabulate import tabulate
from tqdm import tqdm

from ..Channel.models import PowerPolicy, Scenario
from ..config import config
from ..GameEngine.game import MacGame
from ..GameEngine.models import REPORT_COLUMNS, RunReport
from ..utils import announce
from .algorithms import carry_profile, run_algorithm, run_pareto
from .library import load_scenario
from .models import SweepSpec
from .plots import write_gnuplot

SWEEP_COLUMNS = ["budget", "utility", *REPORT_COLUMNS]
SUMMARY_COLUMNS = ["scenario_id", "budget", "algorithm", "seed", "utility", "sum_tau", "jain", "converged", "be_sum_tau"]
FLOAT_FORMAT = "%.12g"
TREND_TOL = 1e-9

Incumbents = Dict[int, List[PowerPolicy]]


@dataclass(frozen=True)
class TrendFinding:
    """One violated ordering.

    `kind` is "bound" (global_baseline below a searched profile), "sum_order"
    (nbs or pp below cce), "fairness" (Jain index of nbs below pp or cce) or
    "monotone" (a curve dropping as the budget grows).
    """

    kind: Literal["bound", "sum_order", "fairness", "monotone"]
    algorithm: str
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass
class SweepOutcome:
    scenario_id: str
    rows: pd.DataFrame
    summary: pd.DataFrame
    findings: List[TrendFinding] = field(default_factory=list)
    files: List[Path] = field(default_factory=list)


def _run_point(scenario: Scenario, scenario_id: str, spec: SweepSpec, budget: float, incumbents: Optional[Incumbents] = None) -> Tuple[List[RunReport], Incumbents]:
    """All algorithms and seeds at one budget, plus the Pareto profile of every seed as policies."""
    game = MacGame(scenario.with_budget(budget, spec.grid_cap_multiple), scenario_id)
    incumbents = incumbents or {}
    reports, carried = [], {}
    for algorithm in spec.algorithms:
        for seed in spec.seeds:
            if algorithm == "pp":
                report = run_pareto(game, spec, seed, budget, initial_profile=carry_profile(game, incumbents.get(seed)))
                carried[seed] = [space.policy(a) for space, a in zip(game.spaces, report.profile)]
            else:
                report = run_algorithm(algorithm, game, spec, seed, budget)
            reports.append(report)
    return reports, carried


def reports_to_frames(reports: List[RunReport]):
    """Per-user rows and one summary row per (budget, algorithm, seed)."""
    rows = [report.to_frame().assign(budget=report.budget, utility=report.utility) for report in reports]
    frame = pd.concat(rows, ignore_index=True)[SWEEP_COLUMNS] if rows else pd.DataFrame(columns=SWEEP_COLUMNS)
    summary = pd.DataFrame(
        [
            {
                "scenario_id": report.scenario_id,
                "budget": report.budget,
                "algorithm": report.algorithm,
                "seed": report.seed,
                "utility": report.utility,
                "sum_tau": report.sum_throughput,
                "jain": report.jain,
                "converged": report.converged,
                # Bayesian-equilibrium comparison curve, not computed
                "be_sum_tau": None,
            }
            for report in reports
        ],
        columns=SUMMARY_COLUMNS,
    )
    return frame, summary


def check_trends(summary: pd.DataFrame, cce_slack: float = 0.0) -> List[TrendFinding]:
    """List every violation of the expected qualitative orderings, seed-averaged.

    At every budget: global_baseline >= nbs, pp and nbs, pp >= cce - cce_slack in sum
    throughput; Jain(nbs) >= Jain(pp), Jain(cce). Along the budget axis every
    algorithm's sum throughput is nondecreasing.
    """
    if summary.empty:
        return []
    means = summary.groupby(["budget", "algorithm"])[["sum_tau", "jain"]].mean()
    findings = []
    for budget, point in means.groupby(level="budget"):
        point = point.droplevel("budget")
        sums, jains = point["sum_tau"], point["jain"]
        for upper, lower in [("global_baseline", "nbs"), ("global_baseline", "pp"), ("nbs", "cce"), ("pp", "cce")]:
            slack = cce_slack if lower == "cce" else 0.0
            if upper in sums and lower in sums and sums[upper] < sums[lower] - slack - TREND_TOL:
                kind = "bound" if upper == "global_baseline" else "sum_order"
                findings.append(TrendFinding(kind, upper if kind == "sum_order" else lower, f"budget {budget:g}: sum throughput of {upper} ({sums[upper]:.6g}) below {lower} ({sums[lower]:.6g})"))
        for lower in ["pp", "cce"]:
            if "nbs" in jains and lower in jains and jains["nbs"] < jains[lower] - TREND_TOL:
                findings.append(TrendFinding("fairness", "nbs", f"budget {budget:g}: Jain index of nbs ({jains['nbs']:.6g}) below {lower} ({jains[lower]:.6g})"))

    for algorithm, curve in means["sum_tau"].groupby(level="algorithm"):
        values = curve.droplevel("algorithm").sort_index()
        for (b0, v0), (b1, v1) in zip(values.items(), list(values.items())[1:]):
            if v1 < v0 - TREND_TOL:
                findings.append(TrendFinding("monotone", algorithm, f"{algorithm}: sum throughput drops from {v0:.6g} at budget {b0:g} to {v1:.6g} at budget {b1:g}"))
    return findings


def write_sweep(reports: List[RunReport], output_dir: Path, scenario_id: str) -> List[Path]:
    frame, summary = reports_to_frames(reports)
    output_dir.mkdir(parents=True, exist_ok=True)
    rows_path = output_dir / f"sweep_{scenario_id}.csv"
    summary_path = output_dir / f"summary_{scenario_id}.csv"
    frame.to_csv(rows_path, index=False, float_format=FLOAT_FORMAT)
    summary.to_csv(summary_path, index=False, float_format=FLOAT_FORMAT)
    files = [rows_path, summary_path]
    if not summary.empty:
        files += write_gnuplot(summary, output_dir, scenario_id)
    return files


def run_sweep(spec: SweepSpec, output_dir: Optional[str] = None, max_workers: Optional[int] = None) -> SweepOutcome:
    """Run every algorithm and seed at every budget of `spec` and write the results.

    With `carry_incumbent` the budgets run in ascending order and each Pareto search
    starts from the previous budget's Pareto profile, which stays feasible as the budget
    grows. Otherwise budget points are independent; with `max_workers` > 1 they run on
    a thread pool and are merged in budget order. Whatever finished is written even
    when a point fails.

    Returns:
        SweepOutcome with the per-user rows, the summary and any trend violations.
    """
    scenario_id, scenario = load_scenario(spec.scenario)
    out = Path(output_dir or spec.output_dir or config.output_dir)
    max_workers = config.max_workers if max_workers is None else max_workers
    announce(f"Sweeping {scenario_id}: {len(spec.budgets)} budgets x {len(spec.algorithms)} algorithms x {len(spec.seeds)} seeds", "🚀")

    reports: List[RunReport] = []
    try:
        if max_workers > 1 and not spec.carry_incumbent:
            with ThreadPoolExecutor(max_workers=max_workers) as executor:
                futures = [executor.submit(_run_point, scenario, scenario_id, spec, budget) for budget in spec.budgets]
                for future in futures:
                    reports.extend(future.result()[0])
        else:
            incumbents: Incumbents = {}
            for budget in tqdm(spec.budgets, desc="Budgets", disable=not config.verbose):
                point, carried = _run_point(scenario, scenario_id, spec, budget, incumbents if spec.carry_incumbent else None)
                reports.extend(point)
                incumbents = carried
    finally:
        files = write_sweep(reports, out, scenario_id)

    frame, summary = reports_to_frames(reports)
    cce_slack = spec.regret_target * sum(scenario.max_rate(i) for i in range(scenario.num_users))
    findings = check_trends(summary, cce_slack)

    if config.verbose:
        table = summary.pivot_table(index="budget", columns="algorithm", values="sum_tau", aggfunc="mean")
        print(tabulate(table, headers="keys", tablefmt="pretty", showindex=True))
    for path in files:
        announce(f"Wrote {path}", "📝")
    for finding in findings:
        announce(str(finding), "⚠️")
    if not findings:
        announce("All trend checks hold", "✅")
    return SweepOutcome(scenario_id=scenario_id, rows=frame, summary=summary, findings=findings, files=files)
