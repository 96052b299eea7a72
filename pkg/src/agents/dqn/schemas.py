"""
Pydantic schemas for the DQN agent: training hyperparameters and per-step stats.
"""

from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from ...losses.schemas import EntropyConfig, LossKind
from ...networks.base import Aggregator
from ...replay.buffer import DEFAULT_CAPACITY

# ========== Agent configuration ==========


class AgentConfig(BaseModel):
    """Acting, replay and update schedule of a DQN agent."""
    epsilon_start: float = Field(default=1.0, ge=0, le=1, description="Initial exploration rate")
    epsilon_end: float = Field(default=0.05, ge=0, le=1, description="Final exploration rate")
    epsilon_decay_steps: int = Field(
        default=10_000, ge=1, description="Env steps over which epsilon decays linearly"
    )
    target_sync_period: int = Field(
        default=500, ge=1, description="Copy online to target when step % C == 0"
    )
    batch_size: int = Field(default=32, ge=1, description="Minibatch size")
    warmup_steps: int = Field(
        default=1000, ge=1, description="Env steps collected before the first gradient step"
    )
    gamma: float = Field(default=0.99, ge=0, le=1, description="Discount factor")
    loss_kind: LossKind = Field(default=LossKind.DQN, description="Training loss: dqn or maxent")
    aggregator: Aggregator = Field(default=Aggregator.MEAN, description="Dueling aggregator")
    entropy: EntropyConfig = Field(
        default_factory=EntropyConfig, description="Advantage-entropy regularizer"
    )
    replay_capacity: int = Field(default=DEFAULT_CAPACITY, ge=1, description="Replay size")
    clip_delta: Optional[float] = Field(
        default=None, gt=0, description="Huber threshold; None keeps the squared error"
    )

    @model_validator(mode="after")
    def _check_schedule(self) -> "AgentConfig":
        problems: List[str] = []
        if self.epsilon_end > self.epsilon_start:
            problems.append(
                f"epsilon_end ({self.epsilon_end}) must not exceed epsilon_start ({self.epsilon_start})"
            )
        if self.warmup_steps < self.batch_size:
            problems.append(
                f"warmup_steps ({self.warmup_steps}) must be >= batch_size ({self.batch_size})"
            )
        if problems:
            raise ValueError("; ".join(problems))
        return self


# ========== Training output ==========


class TrainStats(BaseModel):
    """One record per gradient step."""
    step: int = Field(description="Environment steps taken so far")
    episode_return: float = Field(description="Undiscounted return of the last finished episode")
    loss_value: float = Field(description="Loss that was minimized at this step")
    mean_entropy: float = Field(ge=0, description="Mean advantage entropy over the minibatch")
    epsilon: float = Field(ge=0, le=1, description="Exploration rate used for the env step")

    def csv_row(self) -> str:
        return ",".join(
            [str(self.step)]
            + [f"{value:.17g}" for value in (self.episode_return, self.loss_value, self.mean_entropy, self.epsilon)]
        )


STATS_HEADER = "step,episode_return,loss,mean_entropy,epsilon"


class EvalResult(BaseModel):
    """Return statistics of an evaluation run."""
    mean: float = Field(description="Mean undiscounted episode return")
    std: float = Field(ge=0, description="Population standard deviation of returns")
    returns: List[float] = Field(description="Per-episode returns, in episode order")
    episodes: int = Field(ge=1, description="Number of episodes")
    epsilon: float = Field(ge=0, le=1, description="Exploration rate during evaluation")
