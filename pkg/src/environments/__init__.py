"""
Environments - seedable toy MDPs, the value-iteration oracle and golden traces.
"""

from .base import BaseEnvironment, EnvSpec, StepResult, one_hot
from .chain import ChainMDP
from .corridor import CorridorDodge
from .factory import EnvFactory, UnknownEnvironmentError, create_env
from .gridworld import GridWorld
from .tabular import TabularMDP, bellman_backup, greedy_policy, rollout_return, value_iteration
from .traces import obs_hash, read_trace, record_trace, verify_trace

__all__ = [
    "BaseEnvironment",
    "EnvSpec",
    "StepResult",
    "one_hot",
    "ChainMDP",
    "CorridorDodge",
    "EnvFactory",
    "UnknownEnvironmentError",
    "create_env",
    "GridWorld",
    "TabularMDP",
    "bellman_backup",
    "greedy_policy",
    "rollout_return",
    "value_iteration",
    "obs_hash",
    "read_trace",
    "record_trace",
    "verify_trace",
]
