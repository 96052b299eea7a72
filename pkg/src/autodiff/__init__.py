"""
Autodiff - minimal reverse-mode engine for small multilayer perceptrons.
"""

from . import ops
from .ops import forward_dense, log_softmax, softmax
from .optim import (
    OptimizerConfig,
    OptimizerKind,
    OptimizerState,
    init_optimizer,
    optimizer_step,
)
from .tape import Node, Tape, backward

__all__ = [
    "ops",
    "Node",
    "Tape",
    "backward",
    "forward_dense",
    "softmax",
    "log_softmax",
    "OptimizerConfig",
    "OptimizerKind",
    "OptimizerState",
    "init_optimizer",
    "optimizer_step",
]
