"""
Sum throughput and fairness versus average-power budget on the fixed-rate fading MAC:
coarse correlated equilibrium, Pareto point, Nash bargaining solution and the
centralized optimum, side by side.
"""

from mac_playground.Harness import load_sweep_spec, run_sweep

if __name__ == "__main__":
    outcome = run_sweep(load_sweep_spec("fmac-fixed"), output_dir="results")
    print(outcome.summary.to_string(index=False))
