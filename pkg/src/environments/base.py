"""
Base Environment - common interface for the bundled toy MDPs.

Every environment is a pure function of (seed, action sequence): ``reset``
reseeds a private generator and ``step`` only consumes that generator.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..exceptions import ContractError

if TYPE_CHECKING:
    from .tabular import TabularMDP

logger = logging.getLogger(__name__)


class EnvSpec(BaseModel):
    """Static description of an environment."""
    name: str = Field(description="Registry name")
    observation_dim: int = Field(ge=1, description="Observation vector width")
    action_count: int = Field(ge=2, description="Number of discrete actions")
    max_episode_steps: int = Field(ge=1, description="Steps before truncation")
    discount_hint: float = Field(default=0.99, ge=0, le=1, description="Suggested discount")


@dataclass
class StepResult:
    """Outcome of one environment step."""
    observation: np.ndarray
    reward: float
    terminal: bool
    truncated: bool

    @property
    def done(self) -> bool:
        return self.terminal or self.truncated


class BaseEnvironment(ABC):
    """
    Abstract base class for environments.

    Subclasses implement ``_reset`` and ``_transition``; episode bookkeeping
    (step counting, truncation, misuse checks) lives here.
    """

    name: str = "base"

    def __init__(self, max_episode_steps: int):
        if max_episode_steps < 1:
            raise ContractError(f"max_episode_steps must be >= 1, got {max_episode_steps}")
        self.max_episode_steps = int(max_episode_steps)
        self.rng = np.random.default_rng(0)
        self.elapsed_steps = 0
        self._needs_reset = True

    @property
    @abstractmethod
    def spec(self) -> EnvSpec:
        """Static description."""

    @abstractmethod
    def _reset(self) -> np.ndarray:
        """Sample a start state from ``self.rng`` and return its observation."""

    @abstractmethod
    def _transition(self, action: int) -> Tuple[np.ndarray, float, bool]:
        """Advance the state; return (observation, reward, terminal)."""

    def reset(self, seed: int = 0) -> np.ndarray:
        """
        Start a new episode.

        Args:
            seed: Start-state seed; equal seeds give equal episodes.

        Returns:
            First observation.
        """
        self.rng = np.random.default_rng(seed)
        self.elapsed_steps = 0
        self._needs_reset = False
        return self._reset().copy()

    def step(self, action: int) -> StepResult:
        """
        Apply an action.

        Raises:
            ContractError: If the action is out of range or the episode has ended.
        """
        if self._needs_reset:
            raise ContractError(f"{self.name}: episode finished or not started; call reset()")
        action = int(action)
        if not 0 <= action < self.spec.action_count:
            raise ContractError(f"{self.name}: action {action} outside [0, {self.spec.action_count})")

        observation, reward, terminal = self._transition(action)
        self.elapsed_steps += 1
        truncated = not terminal and self.elapsed_steps >= self.max_episode_steps
        self._needs_reset = terminal or truncated
        return StepResult(observation=observation.copy(), reward=float(reward), terminal=terminal, truncated=truncated)

    @property
    def is_tabular(self) -> bool:
        """Whether ``to_tabular`` is available."""
        return False

    def to_tabular(self) -> "TabularMDP":
        """Exact tabular model, for environments that have one."""
        raise ContractError(f"{self.name} has no tabular model")

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(max_episode_steps={self.max_episode_steps})"


def one_hot(index: int, size: int) -> np.ndarray:
    vector = np.zeros(size, dtype=np.float64)
    vector[index] = 1.0
    return vector
