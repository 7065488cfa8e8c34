"""Plain-text gnuplot data files and scripts for sweep results."""

from pathlib import Path
from typing import List

import pandas as pd

GNUPLOT_TEMPLATE = """# sum throughput and Jain fairness versus average-power budget for {scenario_id}
set terminal pngcairo size 900,600
set key left top
set grid
set xlabel "average power budget (unit noise)"

set output "sumrate_{scenario_id}.png"
set ylabel "sum throughput (bits/channel use)"
plot {sum_plots}

set output "fairness_{scenario_id}.png"
set ylabel "Jain index"
set yrange [0:1.05]
plot {jain_plots}
"""


def write_table(table: pd.DataFrame, path: Path) -> Path:
    """Whitespace-separated columns, one row per budget, header as a comment line."""
    lines = ["# budget " + " ".join(table.columns)]
    for budget, row in table.iterrows():
        lines.append(" ".join(f"{value:.12g}" for value in [budget, *row.tolist()]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_gnuplot(summary: pd.DataFrame, output_dir: Path, scenario_id: str) -> List[Path]:
    """Write sumrate/fairness data files (seed-averaged) and the script plotting them."""
    sums = summary.pivot_table(index="budget", columns="algorithm", values="sum_tau", aggfunc="mean", sort=True)
    jain = summary.pivot_table(index="budget", columns="algorithm", values="jain", aggfunc="mean", sort=True)
    sum_path = write_table(sums, output_dir / f"sumrate_{scenario_id}.dat")
    jain_path = write_table(jain, output_dir / f"fairness_{scenario_id}.dat")

    def plots(data: Path, columns) -> str:
        return ", \\\n     ".join(f'"{data.name}" using 1:{k + 2} with linespoints title "{name}"' for k, name in enumerate(columns))

    script = output_dir / f"plot_{scenario_id}.gp"
    script.write_text(GNUPLOT_TEMPLATE.format(scenario_id=scenario_id, sum_plots=plots(sum_path, sums.columns), jain_plots=plots(jain_path, jain.columns)), encoding="utf-8")
    return [sum_path, jain_path, script]
