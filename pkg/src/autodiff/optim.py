"""
Gradient-descent optimizers: plain SGD and RMSProp.

Parameter maps are ``Dict[str, np.ndarray]``. ``optimizer_step`` never mutates
its inputs; it returns fresh parameter and state objects.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..exceptions import ContractError, DimensionError

logger = logging.getLogger(__name__)

ParamMap = Dict[str, np.ndarray]


class OptimizerKind(str, Enum):
    """Supported update rules."""
    SGD = "sgd"
    RMSPROP = "rmsprop"


class OptimizerConfig(BaseModel):
    """Optimizer hyperparameters (DQN-literature RMSProp defaults)."""
    kind: OptimizerKind = Field(default=OptimizerKind.RMSPROP, description="Update rule")
    learning_rate: float = Field(default=2.5e-4, gt=0, description="Step size")
    decay: float = Field(default=0.95, ge=0, lt=1, description="RMSProp accumulator decay")
    epsilon: float = Field(default=1e-2, gt=0, description="RMSProp denominator offset")


@dataclass
class OptimizerState:
    """Optimizer settings plus per-parameter running squared gradients."""
    config: OptimizerConfig
    accumulators: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def kind(self) -> OptimizerKind:
        return self.config.kind

    @property
    def learning_rate(self) -> float:
        return self.config.learning_rate


def init_optimizer(params: ParamMap, config: OptimizerConfig) -> OptimizerState:
    """
    Create an optimizer state with zero accumulators shaped like ``params``.

    Args:
        params: Parameter map the optimizer will update.
        config: Optimizer hyperparameters.

    Returns:
        Fresh OptimizerState.
    """
    accumulators = {}
    if config.kind == OptimizerKind.RMSPROP:
        accumulators = {name: np.zeros_like(value) for name, value in params.items()}
    return OptimizerState(config=config, accumulators=accumulators)


def optimizer_step(
    params: ParamMap,
    grads: ParamMap,
    state: OptimizerState,
) -> Tuple[ParamMap, OptimizerState]:
    """
    Apply one update.

    SGD: ``p <- p - lr * g``.
    RMSProp: ``a <- decay * a + (1 - decay) * g**2``; ``p <- p - lr * g / sqrt(a + eps)``.

    Args:
        params: Current parameters.
        grads: Gradients with exactly the same keys.
        state: Optimizer state.

    Returns:
        Tuple of (updated params, updated state).

    Raises:
        ContractError: If the key sets differ.
        DimensionError: If a gradient or accumulator shape differs from its parameter.
    """
    if set(params) != set(grads):
        missing = sorted(set(params) ^ set(grads))
        raise ContractError(f"Gradient keys do not match parameter keys: {missing}")

    cfg = state.config
    new_params: ParamMap = {}
    new_acc: Dict[str, np.ndarray] = {}

    for name, value in params.items():
        grad = grads[name]
        if grad.shape != value.shape:
            raise DimensionError(f"Gradient shape mismatch for {name}", grad.shape, value.shape)

        if cfg.kind == OptimizerKind.SGD:
            new_params[name] = value - cfg.learning_rate * grad
            continue

        acc = state.accumulators.get(name)
        if acc is None:
            acc = np.zeros_like(value)
        if acc.shape != value.shape:
            raise DimensionError(f"Accumulator shape mismatch for {name}", acc.shape, value.shape)
        acc = cfg.decay * acc + (1.0 - cfg.decay) * grad * grad
        new_acc[name] = acc
        new_params[name] = value - cfg.learning_rate * grad / np.sqrt(acc + cfg.epsilon)

    return new_params, OptimizerState(config=cfg, accumulators=new_acc)
