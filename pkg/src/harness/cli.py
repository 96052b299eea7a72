"""
duelab command line.

    duelab train   --config run.json [--seed N] [--out DIR] [--quiet]
    duelab eval    --checkpoint PATH [--env NAME] [--episodes N] [--epsilon E] [--seed N] [--out DIR]
    duelab compare --config run.json [--methods ME DN] [--envs chain corridor] [--out DIR]
    duelab oracle  --env chain [--config run.json] [--gamma G] [--tol T] [--out DIR]

Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from ..exceptions import DuelabError
from .config import METHOD_PRESETS, RunConfig, default_env_name, format_validation_error
from .runner import run_compare, run_eval, run_oracle, run_train

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def configure_logging(quiet: bool = False) -> None:
    logging.basicConfig(
        level="WARNING" if quiet else os.getenv("LOG_LEVEL", "INFO"),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duelab",
        description="Dueling Q-networks with an advantage-entropy loss on toy MDPs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="Output directory (overrides the config)")
        p.add_argument("--quiet", action="store_true", help="Only log warnings and errors")

    train = sub.add_parser("train", help="Train one run per seed")
    train.add_argument("--config", help="JSON run config (defaults apply when omitted)")
    train.add_argument("--seed", type=int, help="Train this single seed instead of config seeds")
    common(train)

    evaluate = sub.add_parser("eval", help="Evaluate a checkpoint")
    evaluate.add_argument("--checkpoint", required=True, help="Checkpoint file (.qlck)")
    evaluate.add_argument("--env", help="Environment (defaults to the one recorded in the checkpoint)")
    evaluate.add_argument("--episodes", type=int, help="Number of episodes")
    evaluate.add_argument("--epsilon", type=float, help="Exploration rate while evaluating")
    evaluate.add_argument("--seed", type=int, help="Base evaluation seed")
    common(evaluate)

    compare = sub.add_parser("compare", help="Compare methods over seeds and environments")
    compare.add_argument("--config", help="JSON run config shared by all methods")
    compare.add_argument(
        "--methods", nargs="+", default=["ME", "DN"], help=f"Method labels from {list(METHOD_PRESETS)}"
    )
    compare.add_argument("--envs", nargs="+", help="Table columns (default: the config env)")
    compare.add_argument("--seed", type=int, help="Run a single seed (compare then rejects it)")
    common(compare)

    oracle = sub.add_parser("oracle", help="Value iteration on a tabular environment")
    oracle.add_argument("--env", help="Environment name")
    oracle.add_argument("--config", help="Take env name/kwargs and gamma from this run config")
    oracle.add_argument("--gamma", type=float, help="Discount (default: config agent.gamma)")
    oracle.add_argument("--tol", type=float, default=1e-10, help="Sup-norm stopping tolerance")
    common(oracle)
    return parser


def load_config(path: Optional[str], seed: Optional[int] = None, out: Optional[str] = None) -> RunConfig:
    """Read a config file (or start from defaults) and apply CLI overrides before validation."""
    data: Dict[str, Any] = {}
    if path:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    if seed is not None:
        data["seeds"] = [seed]
    if out is not None:
        data["output_dir"] = out
    return RunConfig.model_validate(data)


def _cmd_train(args: argparse.Namespace) -> None:
    config = load_config(args.config, args.seed, args.out)
    summary = run_train(config)
    for outcome in summary.outcomes:
        print(f"seed {outcome.seed}: {outcome.evaluation.mean:.6f} ± {outcome.evaluation.std:.6f}")


def _cmd_eval(args: argparse.Namespace) -> None:
    result = run_eval(
        args.checkpoint,
        env_name=args.env,
        episodes=args.episodes,
        epsilon=args.epsilon,
        seed=args.seed,
        out=args.out,
    )
    print(f"{result.mean:.6f} ± {result.std:.6f} ({result.episodes} episodes)")


def _cmd_compare(args: argparse.Namespace) -> None:
    config = load_config(args.config, args.seed, args.out)
    table = run_compare(config, args.methods, args.envs)
    print(table.to_markdown(), end="")


def _cmd_oracle(args: argparse.Namespace) -> None:
    env_name, env_kwargs, gamma = args.env, None, args.gamma
    if args.config:
        config = load_config(args.config)
        env_name = env_name or config.env_name
        env_kwargs = config.env_kwargs if env_name == config.env_name else None
        gamma = config.agent.gamma if gamma is None else gamma
    result = run_oracle(
        env_name or default_env_name(),
        env_kwargs,
        gamma=0.99 if gamma is None else gamma,
        tol=args.tol,
        out=args.out,
    )
    print(f"{result.env_name} (gamma={result.gamma}, {result.sweeps} sweeps)")
    for state, (value, q_row, action) in enumerate(zip(result.values, result.q_values, result.policy)):
        q_text = " ".join(f"{q:.6f}" for q in q_row)
        print(f"  s={state}: V*={value:.6f}  Q*=[{q_text}]  greedy={action}")


COMMANDS = {
    "train": _cmd_train,
    "eval": _cmd_eval,
    "compare": _cmd_compare,
    "oracle": _cmd_oracle,
}


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.quiet)

    try:
        COMMANDS[args.command](args)
    except ValidationError as e:
        print(f"Invalid configuration:\n{format_validation_error(e)}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as e:
        print(f"Invalid configuration: not valid JSON ({e})", file=sys.stderr)
        return EXIT_VALIDATION
    except (DuelabError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
