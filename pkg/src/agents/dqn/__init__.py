"""DQN Agent - epsilon-greedy training loop over either loss."""

from .agent import (
    DEFAULT_EVAL_EPSILON,
    DQNAgent,
    EpsilonSchedule,
    epsilon_greedy,
    evaluate,
    select_action,
)
from .schemas import STATS_HEADER, AgentConfig, EvalResult, TrainStats

__all__ = [
    "DEFAULT_EVAL_EPSILON",
    "DQNAgent",
    "EpsilonSchedule",
    "epsilon_greedy",
    "evaluate",
    "select_action",
    "STATS_HEADER",
    "AgentConfig",
    "EvalResult",
    "TrainStats",
]
