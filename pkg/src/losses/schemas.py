"""
Schemas for TD losses: minibatches and the entropy regularizer settings.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from ..exceptions import ContractError, DimensionError


class LossKind(str, Enum):
    """Training loss selector."""
    DQN = "dqn"
    MAXENT = "maxent"


class EntropyConfig(BaseModel):
    """Weight and temperature of the advantage-entropy regularizer."""
    alpha: float = Field(default=0.01, ge=0, description="Entropy weight")
    temperature: float = Field(default=1.0, gt=0, description="Softmax temperature tau")
    anneal_steps: Optional[int] = Field(
        default=None,
        ge=1,
        description="If set, alpha decays linearly to 0 over this many gradient steps",
    )

    def coefficient_at(self, step: int) -> float:
        """Effective alpha after ``step`` gradient steps."""
        if self.anneal_steps is None:
            return self.alpha
        return self.alpha * max(0.0, 1.0 - step / self.anneal_steps)


@dataclass
class TDBatch:
    """
    Minibatch of transitions plus the discount.

    Arrays are converted on construction: states/next_states to float64
    ``(B, d)``, actions to int64, rewards to float64, terminals to bool.
    """
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray
    gamma: float = 0.99

    def __post_init__(self):
        self.states = np.atleast_2d(np.asarray(self.states, dtype=np.float64))
        self.next_states = np.atleast_2d(np.asarray(self.next_states, dtype=np.float64))
        self.actions = np.asarray(self.actions, dtype=np.int64).reshape(-1)
        self.rewards = np.asarray(self.rewards, dtype=np.float64).reshape(-1)
        self.terminals = np.asarray(self.terminals, dtype=bool).reshape(-1)
        self.gamma = float(self.gamma)

        size = len(self.states)
        lengths = {len(self.actions), len(self.rewards), len(self.next_states), len(self.terminals)}
        if size < 1:
            raise ContractError("TD batch must contain at least one transition")
        if lengths != {size}:
            raise ContractError(f"TD batch sequences have unequal lengths: {sorted(lengths | {size})}")
        if self.states.shape != self.next_states.shape:
            raise DimensionError("states and next_states differ", self.states.shape, self.next_states.shape)
        if not 0.0 <= self.gamma <= 1.0:
            raise ContractError(f"gamma must be in [0, 1], got {self.gamma}")
        if np.any(self.actions < 0):
            raise ContractError("action indices must be non-negative")

    def __len__(self) -> int:
        return len(self.states)
