"""
Run configuration: schema, JSON loading, method presets.

A run config is a JSON document validated by ``RunConfig``; every field has
a default, and ``resolved_json`` writes the fully materialized config so a
run never depends on a hidden default.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..agents.dqn.schemas import AgentConfig
from ..autodiff import OptimizerConfig
from ..losses import LossKind
from ..networks import NetworkConfig

logger = logging.getLogger(__name__)


def default_output_dir() -> str:
    return os.getenv("DUELAB_OUTPUT_DIR", "runs")


def default_env_name() -> str:
    return os.getenv("DUELAB_DEFAULT_ENV", "chain")


class RunConfig(BaseModel):
    """Full experiment description."""
    model_config = ConfigDict(extra="forbid")

    env_name: str = Field(default_factory=default_env_name, description="Registered environment")
    env_kwargs: Dict[str, Any] = Field(
        default_factory=dict, description="Environment constructor arguments"
    )
    agent: AgentConfig = Field(default_factory=AgentConfig, description="Agent hyperparameters")
    net: NetworkConfig = Field(default_factory=NetworkConfig, description="Network architecture")
    optimizer: OptimizerConfig = Field(
        default_factory=OptimizerConfig, description="Optimizer settings"
    )
    total_steps: int = Field(default=20_000, ge=1, description="Environment steps per seed")
    seeds: List[int] = Field(default_factory=lambda: [0], description="One training run per seed")
    output_dir: str = Field(default_factory=default_output_dir, description="Artifact directory")
    eval_episodes: int = Field(default=10, ge=1, description="Episodes of the final evaluation")
    eval_epsilon: float = Field(default=0.01, ge=0, le=1, description="Evaluation exploration")
    max_workers: int = Field(default=1, ge=1, description="Parallel seed runs (process pool)")

    @field_validator("seeds")
    @classmethod
    def _seeds_present(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("seeds must contain at least one seed")
        if len(set(value)) != len(value):
            raise ValueError(f"seeds must be unique, got {value}")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunConfig":
        problems = []
        if self.total_steps <= self.agent.warmup_steps:
            problems.append(
                f"total_steps ({self.total_steps}) must exceed agent.warmup_steps "
                f"({self.agent.warmup_steps})"
            )
        if self.net.aggregator != self.agent.aggregator:
            problems.append(
                f"net.aggregator ({self.net.aggregator.value}) and agent.aggregator "
                f"({self.agent.aggregator.value}) disagree"
            )
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def for_seed(self, seed: int) -> "RunConfig":
        """The same run restricted to one seed."""
        return self.model_copy(update={"seeds": [seed]})

    def resolved_json(self) -> str:
        return self.model_dump_json(indent=2)


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Load and validate a JSON run config.

    Raises:
        ValidationError: With one entry per violated field.
        OSError: If the file cannot be read.
    """
    text = Path(path).read_text(encoding="utf-8")
    config = RunConfig.model_validate_json(text)
    logger.debug(f"Loaded run config from {path}")
    return config


def format_validation_error(error: ValidationError) -> str:
    """One ``field.path: message`` line per violation."""
    lines = []
    for entry in error.errors():
        location = ".".join(str(part) for part in entry["loc"]) or "config"
        lines.append(f"{location}: {entry['msg']}")
    return "\n".join(lines)


# ========== Method presets ==========

METHOD_PRESETS: Dict[str, Dict[str, str]] = {
    "ME": {"kind": "dueling", "loss_kind": LossKind.MAXENT.value},
    "DN": {"kind": "dueling", "loss_kind": LossKind.DQN.value},
    "DQN": {"kind": "single", "loss_kind": LossKind.DQN.value},
}


def apply_method(config: RunConfig, label: str) -> RunConfig:
    """
    Specialize a base config to one compared method.

    ME is dueling + entropy loss, DN dueling + DQN loss, DQN the single-stream
    baseline. Everything else (seeds, schedules, aggregator, alpha) is shared.
    """
    preset = METHOD_PRESETS[label]
    agent = config.agent.model_copy(update={"loss_kind": LossKind(preset["loss_kind"])})
    net = config.net.model_copy(update={"kind": preset["kind"]})
    return config.model_copy(update={"agent": agent, "net": net})


class CompareRequest(BaseModel):
    """Validated compare job: methods x environments over a shared seed list."""
    methods: List[str] = Field(description="Method labels, table rows")
    envs: List[str] = Field(description="Environment names, table columns")
    base: RunConfig = Field(description="Shared run configuration")

    @field_validator("methods")
    @classmethod
    def _known_methods(cls, value: List[str]) -> List[str]:
        if len(value) < 2:
            raise ValueError(f"compare needs at least 2 methods, got {value}")
        if len(set(value)) != len(value):
            raise ValueError(f"methods must be unique, got {value}")
        unknown = [label for label in value if label not in METHOD_PRESETS]
        if unknown:
            raise ValueError(f"Unknown methods {unknown}. Available: {list(METHOD_PRESETS)}")
        return value

    @field_validator("envs")
    @classmethod
    def _envs_present(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("compare needs at least one environment")
        return value

    @model_validator(mode="after")
    def _enough_seeds(self) -> "CompareRequest":
        if len(self.base.seeds) < 3:
            raise ValueError(f"compare needs at least 3 seeds, got {self.base.seeds}")
        return self


def dump_json(path: Union[str, Path], payload: Any) -> Path:
    """Write JSON with sorted keys and a trailing newline."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
