"""
Q-networks - single-stream and dueling approximators with target sync and checkpoints.
"""

from .base import (
    Aggregator,
    BaseQNetwork,
    NetworkConfig,
    QHeads,
    QOutput,
    copy_params,
    greedy_actions,
    sync_target,
)
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .dueling import DuelingParams, DuelingQNetwork, aggregate, q_forward_dueling
from .factory import NetworkFactory, create_network
from .single import SingleStreamQNetwork, q_forward_single

__all__ = [
    "Aggregator",
    "BaseQNetwork",
    "NetworkConfig",
    "QHeads",
    "QOutput",
    "copy_params",
    "greedy_actions",
    "sync_target",
    "Checkpoint",
    "load_checkpoint",
    "save_checkpoint",
    "DuelingParams",
    "DuelingQNetwork",
    "aggregate",
    "q_forward_dueling",
    "NetworkFactory",
    "create_network",
    "SingleStreamQNetwork",
    "q_forward_single",
]
