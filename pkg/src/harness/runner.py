"""
Train, compare, evaluate and oracle jobs.

Artifacts of a training run, per seed under ``<output_dir>/seed_<n>/``:
  - ``stats.csv``            one row per gradient step (deterministic bytes)
  - ``checkpoint.qlck``      final online parameters
  - ``resolved_config.json`` the config with every default materialized

Compare jobs lay runs out as ``<output_dir>/<env>/<method>/seed_<n>/`` and add
``eval.json`` per seed, then write ``table.md``, ``table.json`` and
``curves.csv`` at the top level.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from ..agents.dqn import STATS_HEADER, DQNAgent, EvalResult, TrainStats, evaluate
from ..environments import create_env, greedy_policy, value_iteration
from ..exceptions import ContractError, DimensionError
from ..networks import Checkpoint, load_checkpoint
from .config import CompareRequest, RunConfig, apply_method, dump_json
from .tables import ComparisonCell, ComparisonTable

logger = logging.getLogger(__name__)

STATS_FILE = "stats.csv"
CHECKPOINT_FILE = "checkpoint.qlck"
CONFIG_FILE = "resolved_config.json"
EVAL_FILE = "eval.json"
EARLY_FRACTION = 0.1


class SeedOutcome(BaseModel):
    """Result of one seed's training run."""
    seed: int
    run_dir: str
    evaluation: EvalResult
    early_entropy: float = Field(
        description="Mean advantage entropy over the first 10% of gradient steps"
    )
    gradient_steps: int
    curve: List[List[float]] = Field(
        default_factory=list, description="(step, episode_return, mean_entropy) rows"
    )


class TrainSummary(BaseModel):
    """Per-seed outcomes of ``run_train``."""
    output_dir: str
    env_name: str
    outcomes: List[SeedOutcome]

    def as_dict(self) -> Dict[str, Any]:
        return self.model_dump(exclude={"outcomes": {"__all__": {"curve"}}})


class OracleResult(BaseModel):
    """Exact solution of a tabular environment."""
    env_name: str
    gamma: float
    values: List[float] = Field(description="V*(s)")
    q_values: List[List[float]] = Field(description="Q*(s, a)")
    policy: List[int] = Field(description="Greedy action per state (lowest index on ties)")
    sweeps: int


def seed_dir(output_dir: Union[str, Path], seed: int) -> Path:
    return Path(output_dir) / f"seed_{seed}"


def early_entropy(stats: Sequence[TrainStats]) -> float:
    """Mean of ``mean_entropy`` over the first tenth (rounded up) of the records."""
    if not stats:
        return 0.0
    count = max(1, math.ceil(len(stats) * EARLY_FRACTION))
    return float(np.mean([s.mean_entropy for s in stats[:count]]))


def train_seed(config: RunConfig, seed: int, run_dir: Union[str, Path]) -> SeedOutcome:
    """
    Train one seed and write its three artifacts.

    Returns:
        SeedOutcome with the final evaluation.
    """
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    seeded = config.for_seed(seed)
    (run_dir / CONFIG_FILE).write_text(seeded.resolved_json() + "\n", encoding="utf-8")

    env = create_env(config.env_name, config.env_kwargs)
    agent = DQNAgent(env, config.agent, config.net, config.optimizer, seed=seed)

    stats: List[TrainStats] = []
    with (run_dir / STATS_FILE).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(STATS_HEADER + "\n")
        for record in agent.run(config.total_steps):
            fh.write(record.csv_row() + "\n")
            stats.append(record)

    evaluation = agent.evaluate(config.eval_episodes, config.eval_epsilon)
    agent.save(
        run_dir / CHECKPOINT_FILE,
        extra={
            "env_kwargs": config.env_kwargs,
            "eval_episodes": config.eval_episodes,
            "eval_epsilon": config.eval_epsilon,
            "eval_mean": evaluation.mean,
            "eval_std": evaluation.std,
        },
    )
    return SeedOutcome(
        seed=seed,
        run_dir=str(run_dir),
        evaluation=evaluation,
        early_entropy=early_entropy(stats),
        gradient_steps=len(stats),
        curve=[[s.step, s.episode_return, s.mean_entropy] for s in stats],
    )


def _train_job(args) -> SeedOutcome:
    config, seed, run_dir = args
    return train_seed(config, seed, run_dir)


def _run_jobs(jobs: List[tuple], max_workers: int) -> List[SeedOutcome]:
    """Run seed jobs, in parallel when asked; results keep job order."""
    if max_workers <= 1 or len(jobs) <= 1:
        return [_train_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_train_job, jobs))


def run_train(config: RunConfig) -> TrainSummary:
    """
    One training run per seed, artifacts under ``config.output_dir``.

    Also writes ``summary.json`` with every seed's evaluation.
    """
    logger.info(f"Resolved config:\n{config.resolved_json()}")
    jobs = [(config, seed, seed_dir(config.output_dir, seed)) for seed in config.seeds]
    outcomes = _run_jobs(jobs, config.max_workers)
    for outcome in outcomes:
        logger.info(
            f"seed {outcome.seed}: eval {outcome.evaluation.mean:.4f} +/- {outcome.evaluation.std:.4f}"
        )
    summary = TrainSummary(output_dir=config.output_dir, env_name=config.env_name, outcomes=outcomes)
    dump_json(Path(config.output_dir) / "summary.json", summary.as_dict())
    return summary


def run_compare(
    base: RunConfig,
    methods: Sequence[str],
    envs: Optional[Sequence[str]] = None,
) -> ComparisonTable:
    """
    Train every method on every environment and seed, then tabulate.

    ``base.env_kwargs`` applies to ``base.env_name`` only; other columns use
    their environment defaults.

    Raises:
        ValidationError: Fewer than 2 methods, unknown labels or fewer than 3 seeds.
    """
    request = CompareRequest(methods=list(methods), envs=list(envs or [base.env_name]), base=base)
    output_dir = Path(base.output_dir)

    jobs, keys = [], []
    for env_name in request.envs:
        env_kwargs = base.env_kwargs if env_name == base.env_name else {}
        for method in request.methods:
            method_dir = output_dir / env_name / method
            config = apply_method(base, method).model_copy(
                update={"env_name": env_name, "env_kwargs": env_kwargs, "output_dir": str(method_dir)}
            )
            for seed in base.seeds:
                jobs.append((config, seed, seed_dir(method_dir, seed)))
                keys.append((env_name, method, seed))

    logger.info(f"Comparing {request.methods} on {request.envs} over seeds {base.seeds} ({len(jobs)} runs)")
    outcomes = _run_jobs(jobs, base.max_workers)

    by_key = dict(zip(keys, outcomes))
    curve_rows = ["method,env,seed,step,episode_return,mean_entropy"]
    for (env_name, method, seed), outcome in by_key.items():
        dump_json(
            Path(outcome.run_dir) / EVAL_FILE,
            {**outcome.evaluation.model_dump(), "early_entropy": outcome.early_entropy, "seed": seed},
        )
        curve_rows.extend(
            f"{method},{env_name},{seed},{int(step)},{ret:.17g},{ent:.17g}"
            for step, ret, ent in outcome.curve
        )

    cells = {
        method: {
            env_name: ComparisonCell.from_seed_means(
                base.seeds, [by_key[(env_name, method, seed)].evaluation.mean for seed in base.seeds]
            )
            for env_name in request.envs
        }
        for method in request.methods
    }
    table = ComparisonTable(methods=request.methods, envs=request.envs, cells=cells)
    table.validate_seeds()

    output_dir.mkdir(parents=True, exist_ok=True)
    (output_dir / "table.md").write_text(table.to_markdown(), encoding="utf-8")
    (output_dir / "table.json").write_text(table.to_json() + "\n", encoding="utf-8")
    (output_dir / "curves.csv").write_text("\n".join(curve_rows) + "\n", encoding="utf-8")
    logger.info(f"Comparison table:\n{table.to_markdown()}")
    return table


def run_eval(
    checkpoint: Union[str, Path],
    env_name: Optional[str] = None,
    episodes: Optional[int] = None,
    epsilon: Optional[float] = None,
    seed: Optional[int] = None,
    env_kwargs: Optional[Dict[str, Any]] = None,
    out: Optional[Union[str, Path]] = None,
) -> EvalResult:
    """
    Evaluate a saved checkpoint.

    Unset arguments fall back to the checkpoint metadata, so a bare
    ``run_eval(path)`` repeats the training run's final evaluation exactly.

    Raises:
        CheckpointError: If the checkpoint is corrupt or of another version.
        UnknownEnvironmentError: If the environment is not registered.
        DimensionError: If the environment does not fit the network.
    """
    loaded = load_checkpoint(checkpoint)
    name, result = evaluate_checkpoint(loaded, env_name, episodes, epsilon, seed, env_kwargs)
    if out is not None:
        dump_json(Path(out) / EVAL_FILE, {**result.model_dump(), "checkpoint": str(checkpoint), "env": name})
    return result


def evaluate_checkpoint(
    loaded: Checkpoint,
    env_name: Optional[str] = None,
    episodes: Optional[int] = None,
    epsilon: Optional[float] = None,
    seed: Optional[int] = None,
    env_kwargs: Optional[Dict[str, Any]] = None,
) -> Tuple[str, EvalResult]:
    """Evaluate an already loaded checkpoint; returns the environment name used and the result."""
    meta = loaded.metadata
    name = env_name or meta.get("env")
    if not name:
        raise ContractError("No environment given and none recorded in the checkpoint")
    if env_kwargs is None:
        env_kwargs = meta.get("env_kwargs", {}) if name == meta.get("env") else {}
    env = create_env(name, env_kwargs)

    spec = env.spec
    network = loaded.network
    if (spec.observation_dim, spec.action_count) != (network.input_dim, network.action_count):
        raise DimensionError(
            f"Environment {name} does not fit the checkpoint network",
            (spec.observation_dim, spec.action_count),
            (network.input_dim, network.action_count),
        )

    result = evaluate(
        network,
        loaded.params,
        env,
        episodes if episodes is not None else int(meta.get("eval_episodes", 10)),
        epsilon if epsilon is not None else float(meta.get("eval_epsilon", 0.01)),
        seed if seed is not None else int(meta.get("eval_seed", 0)),
    )
    logger.info(f"{name}: {result.mean:.6f} +/- {result.std:.6f} over {result.episodes} episodes")
    return name, result


def run_oracle(
    env_name: str,
    env_kwargs: Optional[Dict[str, Any]] = None,
    gamma: float = 0.99,
    tol: float = 1e-10,
    out: Optional[Union[str, Path]] = None,
) -> OracleResult:
    """
    Value iteration on a tabular environment.

    Raises:
        ContractError: If the environment has no tabular model.
    """
    env = create_env(env_name, env_kwargs)
    history: List[float] = []
    values, q_values = value_iteration(env.to_tabular(), gamma, tol, history=history)
    result = OracleResult(
        env_name=env_name,
        gamma=gamma,
        values=values.tolist(),
        q_values=q_values.tolist(),
        policy=greedy_policy(q_values).tolist(),
        sweeps=len(history),
    )
    if out is not None:
        dump_json(Path(out) / "oracle.json", result.model_dump())
    return result
