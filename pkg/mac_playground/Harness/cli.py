"""Command-line entry point: `mac-playground <command> ...`."""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd
from tabulate import tabulate

from ..Channel.policies import policy_space
from ..config import config
from ..GameEngine.game import MacGame
from ..MW.learner import mw_run
from ..MW.regret import verify_cce
from ..SocialOpt.certify import certify_nbs, certify_pareto
from ..SocialOpt.heuristics import disagreement_point, heuristic_index
from ..SocialOpt.models import DisagreementPoint, SearchConfig
from ..utils import EmptyFeasibleSetError, MacPlaygroundError, NoConvergenceError, ScenarioValidationError, announce
from .algorithms import HISTORY_LIMIT, cce_report, global_baseline, run_search, search_report
from .library import list_scenarios, load_scenario, load_sweep_spec
from .sweep import FLOAT_FORMAT, run_sweep

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3


def _out_dir(args) -> Path:
    path = Path(args.out or config.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, payload: str) -> Path:
    path.write_text(payload + "\n", encoding="utf-8")
    announce(f"Wrote {path}", "📝")
    return path


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    announce(f"Wrote {path}", "📝")
    return path


def _load_game(reference: str) -> MacGame:
    scenario_id, scenario = load_scenario(reference)
    return MacGame(scenario, scenario_id)


def _profile_table(profile: List[int], values) -> str:
    rows = [[i, a, *[f"{v:.6g}" for v in value]] for i, (a, value) in enumerate(zip(profile, zip(*values)))]
    return tabulate(rows, headers=["user", "policy", "nu", "tau"], tablefmt="pretty")


# Commands


def cmd_validate(args) -> int:
    scenario_id, scenario = load_scenario(args.scenario)
    rows = [[i, scenario.num_states(i), len(policy_space(scenario, i)), scenario.power_budget[i]] for i in range(scenario.num_users)]
    print(tabulate(rows, headers=["user", "states", "feasible policies", "budget"], tablefmt="pretty"))
    announce(f"{scenario_id} is valid ({scenario.csi_mode}, {scenario.rate_mode} rate)", "✅", force=True)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    scenario_id, scenario = load_scenario(args.scenario)
    if not 0 <= args.user < scenario.num_users:
        raise ScenarioValidationError("user", f"must lie in [0, {scenario.num_users - 1}]")
    space = policy_space(scenario, args.user)
    frame = pd.DataFrame(space.powers, columns=[f"p{state}" for state in space.states])
    frame.insert(0, "rate", space.rates)
    frame.insert(0, "index", range(len(space)))
    frame["avg_power"] = space.average_powers
    print(tabulate(frame.head(args.show), headers="keys", tablefmt="pretty", showindex=False))
    announce(f"User {args.user} of {scenario_id} has {len(space)} feasible policies", "📊", force=True)
    _write_csv(frame, _out_dir(args) / f"policies_{scenario_id}_user{args.user}.csv")
    return EXIT_OK


def cmd_cce(args) -> int:
    game = _load_game(args.scenario)
    keep_history = args.verify or sum(game.sizes) * args.max_iters <= HISTORY_LIMIT
    result = mw_run(game, args.eps, args.target, args.max_iters, args.seed, args.bandit, args.utility, keep_history)
    out = _out_dir(args)
    _write_csv(result.regret_frame(), out / f"regret_{game.scenario_id}.csv")
    _write_json(out / f"cce_{game.scenario_id}.json", cce_report(game, result).summary_json())
    if args.verify:
        check = verify_cce(game, result, args.target)
        rows = [[i, f"{s:.6g}", ok] for i, (s, ok) in enumerate(zip(check.slack, check.passed))]
        print(tabulate(rows, headers=["user", "slack", f"{args.target}-CCE"], tablefmt="pretty"))
    result.raise_for_convergence()
    return EXIT_OK


def _search_config(args, **kwargs) -> SearchConfig:
    return SearchConfig(
        utility=args.utility,
        explore=args.explore,
        experiment_prob=args.rho,
        max_epochs=args.epochs,
        patience=args.patience,
        seed=args.seed,
        evaluation="sampled" if args.window else "exact",
        window=args.window or 1,
        **kwargs,
    )


def cmd_pareto(args) -> int:
    game = _load_game(args.scenario)
    result = run_search(game, _search_config(args, objective="weighted_sum", weights=args.gamma), args.starts)
    out = _out_dir(args)
    _write_json(out / f"pareto_{game.scenario_id}.json", search_report(game, "pp", result, args.utility).summary_json())
    _write_csv(result.trace_frame(), out / f"pareto_trace_{game.scenario_id}.csv")
    _write_json(out / f"pareto_profile_{game.scenario_id}.json", json.dumps({"profile": result.profile}))
    print(_profile_table(result.profile, (result.success, result.throughput)))
    return EXIT_OK


def cmd_nbs(args) -> int:
    game = _load_game(args.scenario)
    mode = "sampled" if args.tdelta else "exact"
    delta = disagreement_point(game, args.tdelta or 1, args.seed, mode, args.utility)
    result = run_search(game, _search_config(args, objective="nash_product", disagreement=delta), args.starts)
    out = _out_dir(args)
    _write_json(out / f"nbs_{game.scenario_id}.json", search_report(game, "nbs", result, args.utility, disagreement=delta).summary_json())
    _write_csv(result.trace_frame(), out / f"nbs_trace_{game.scenario_id}.csv")
    _write_json(out / f"nbs_profile_{game.scenario_id}.json", json.dumps({"profile": result.profile, "disagreement": delta.values}))
    print(_profile_table(result.profile, (result.success, result.throughput)))
    return EXIT_OK


def _read_profile(path: str, game: MacGame):
    try:
        with open(path, "r", encoding="utf-8") as file:
            data = json.load(file)
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioValidationError("profile", f"cannot read {path}: {e}") from e
    profile = data.get("profile")
    if not isinstance(profile, list) or len(profile) != game.num_users:
        raise ScenarioValidationError("profile", f"expected a list of {game.num_users} policy indices")
    for i, (a, size) in enumerate(zip(profile, game.sizes)):
        if not isinstance(a, int) or not 0 <= a < size:
            raise ScenarioValidationError(f"profile[{i}]", f"must be an integer in [0, {size - 1}]")
    disagreement = data.get("disagreement")
    if disagreement is not None and len(disagreement) != game.num_users:
        raise ScenarioValidationError("disagreement", f"expected {game.num_users} values")
    return profile, disagreement


def cmd_certify(args) -> int:
    game = _load_game(args.scenario)
    profile, values = _read_profile(args.profile, game)
    pareto = certify_pareto(game, profile, args.utility)
    rows = [["pareto", pareto.is_pareto, pareto.dominator]]
    payload = {"pareto": pareto.model_dump()}
    if values is not None:
        heuristic = [heuristic_index(game.scenario, i, space) for i, space in enumerate(game.spaces)]
        delta = DisagreementPoint(profile=heuristic, values=values, utility=args.utility)
        nbs = certify_nbs(game, profile, delta)
        rows.append(["nbs", nbs.is_nbs, f"gap {nbs.gap:.6g}, best {nbs.best_profile}"])
        payload["nbs"] = nbs.model_dump()
    print(tabulate(rows, headers=["certificate", "holds", "details"], tablefmt="pretty"))
    _write_json(_out_dir(args) / f"certify_{game.scenario_id}.json", json.dumps(payload, indent=2, default=str))
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.spec)
    run_sweep(spec, output_dir=args.out)
    return EXIT_OK


def cmd_baseline(args) -> int:
    game = _load_game(args.scenario)
    best = global_baseline(game)
    print(_profile_table(best.profile, (best.success, best.throughput)))
    announce(f"Best sum throughput {best.sum_throughput:.6g} at profile {best.profile}", "✅")
    _write_json(_out_dir(args) / f"baseline_{game.scenario_id}.json", best.model_dump_json(indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mac-playground", description="Fading MAC / MAC-WT power-control games", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--kappa", type=float, default=None, help="throughput scale for dummy subslots, in (0, 1]")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help=f"output directory (default: $MAC_PLAYGROUND_OUT or {config.output_dir})")
    scenario_help = f"bundled scenario id ({', '.join(list_scenarios())}) or JSON file"

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a scenario")
    p.add_argument("scenario", help=scenario_help)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("enumerate", parents=[common], help="list a user's feasible policies")
    p.add_argument("scenario", help=scenario_help)
    p.add_argument("--user", type=int, default=0)
    p.add_argument("--show", type=int, default=20, help="rows printed")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("cce", parents=[common], formatter_class=argparse.ArgumentDefaultsHelpFormatter, help="learn an eps-CCE with multiplicative weights")
    p.add_argument("scenario", help=scenario_help)
    p.add_argument("--eps", type=float, default=None, help="learning rate eps_mw in (0, 1/2); tuned from max-iters when unset")
    p.add_argument("--target", type=float, default=0.05, help="average external regret target")
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bandit", action="store_true", help="update from observed ACKs only")
    p.add_argument("--utility", choices=["success", "throughput"], default="success")
    p.add_argument("--verify", action="store_true", help="check the result against every constant deviation")
    p.set_defaults(handler=cmd_cce)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--utility", choices=["success", "throughput"], default="success")
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--epochs", type=int, default=5000)
    search.add_argument("--patience", type=int, default=200)
    search.add_argument("--explore", type=float, default=0.3)
    search.add_argument("--rho", type=float, default=0.5, help="experiment probability of every user")
    search.add_argument("--window", type=int, default=0, help="slots per candidate; 0 evaluates exactly")
    search.add_argument("--starts", type=int, default=1, help="independent seeded searches")

    p = sub.add_parser("pareto", parents=[common, search], formatter_class=argparse.ArgumentDefaultsHelpFormatter, help="weighted-sum Pareto point by local search")
    p.add_argument("scenario", help=scenario_help)
    p.add_argument("--gamma", type=float, nargs="+", default=None, help="per-user weights (all ones when omitted)")
    p.set_defaults(handler=cmd_pareto)

    p = sub.add_parser("nbs", parents=[common, search], formatter_class=argparse.ArgumentDefaultsHelpFormatter, help="Nash bargaining solution by local search")
    p.add_argument("scenario", help=scenario_help)
    p.add_argument("--tdelta", type=int, default=0, help="slots for the sampled disagreement point; 0 uses exact values")
    p.set_defaults(handler=cmd_nbs)

    p = sub.add_parser("certify", parents=[common], help="exhaustively certify a profile file")
    p.add_argument("scenario", help=scenario_help)
    p.add_argument("--profile", required=True, help='JSON file {"profile": [...], "disagreement": [...]}')
    p.add_argument("--utility", choices=["success", "throughput"], default="success")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("sweep", parents=[common], help="run a budget sweep")
    p.add_argument("spec", help="bundled sweep id or sweep spec JSON file")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("baseline", parents=[common], help="exhaustive sum-throughput maximum")
    p.add_argument("scenario", help=scenario_help)
    p.set_defaults(handler=cmd_baseline)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.kappa is not None:
        if not 0.0 < args.kappa <= 1.0:
            parser.error(f"--kappa must lie in (0, 1], got {args.kappa}")
        config.throughput_scale = args.kappa
    if args.quiet:
        config.verbose = False

    try:
        return args.handler(args)
    except (ScenarioValidationError, EmptyFeasibleSetError) as e:
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except NoConvergenceError as e:
        print(f"⚠️ {e}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (MacPlaygroundError, ValueError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
