"""
Losses - TD targets, the DQN loss and the entropy-augmented loss.
"""

from .entropy import advantage_entropy, entropy_node
from .schemas import EntropyConfig, LossKind, TDBatch
from .td import LossOutput, compute_loss, dqn_loss, maxent_loss, td_target

__all__ = [
    "advantage_entropy",
    "entropy_node",
    "EntropyConfig",
    "LossKind",
    "TDBatch",
    "LossOutput",
    "compute_loss",
    "dqn_loss",
    "maxent_loss",
    "td_target",
]
