"""
CorridorDodge - three-lane corridor with obstacles scrolling toward the agent.

State: the agent's lane plus a ``length x lanes`` occupancy grid, row 0
being the row that reaches the agent on the next step. Each step:

  1. the agent moves (0 left, 1 stay, 2 right; clamped at the walls);
  2. row 0 arrives: if it holds an obstacle in the agent's lane the episode
     terminates with reward 0, otherwise the step pays +1;
  3. rows shift down and a new far row is drawn: with probability
     ``spawn_prob`` one obstacle in a uniformly chosen lane.

At most one obstacle per row means a free adjacent lane always exists, so
"dodge iff an obstacle is in my lane one step ahead" survives every episode
and the optimal return is ``max_episode_steps``.

Observation: one-hot lane followed by the flattened grid (rows nearest first).
"""

from typing import Tuple

import numpy as np

from ..exceptions import ContractError
from .base import BaseEnvironment, EnvSpec, one_hot

LEFT, STAY, RIGHT = 0, 1, 2


class CorridorDodge(BaseEnvironment):
    """Obstacle-dodging corridor."""

    name = "corridor"

    def __init__(
        self,
        lanes: int = 3,
        length: int = 3,
        spawn_prob: float = 0.5,
        max_episode_steps: int = 30,
    ):
        super().__init__(max_episode_steps)
        if lanes < 2 or length < 1:
            raise ContractError(f"CorridorDodge needs lanes >= 2 and length >= 1, got {lanes}, {length}")
        if not 0.0 <= spawn_prob <= 1.0:
            raise ContractError(f"spawn_prob must be in [0, 1], got {spawn_prob}")
        self.lanes = int(lanes)
        self.length = int(length)
        self.spawn_prob = float(spawn_prob)
        self.lane = self.lanes // 2
        self.grid = np.zeros((self.length, self.lanes), dtype=bool)

    @property
    def spec(self) -> EnvSpec:
        return EnvSpec(
            name=self.name,
            observation_dim=self.lanes * (self.length + 1),
            action_count=3,
            max_episode_steps=self.max_episode_steps,
        )

    def _spawn_row(self) -> np.ndarray:
        row = np.zeros(self.lanes, dtype=bool)
        if self.rng.random() < self.spawn_prob:
            row[int(self.rng.integers(self.lanes))] = True
        return row

    def _observe(self) -> np.ndarray:
        return np.concatenate([one_hot(self.lane, self.lanes), self.grid.reshape(-1).astype(np.float64)])

    def _reset(self) -> np.ndarray:
        self.lane = self.lanes // 2
        self.grid = np.stack([self._spawn_row() for _ in range(self.length)])
        return self._observe()

    def _transition(self, action: int) -> Tuple[np.ndarray, float, bool]:
        self.lane = int(np.clip(self.lane + action - 1, 0, self.lanes - 1))
        collided = bool(self.grid[0, self.lane])
        self.grid = np.vstack([self.grid[1:], self._spawn_row()[None, :]])
        if collided:
            return self._observe(), 0.0, True
        return self._observe(), 1.0, False

    def oracle_action(self) -> int:
        """Hand-derived optimal action for the current state."""
        if not self.grid[0, self.lane]:
            return STAY
        return LEFT if self.lane > 0 else RIGHT

    def oracle_return(self) -> float:
        """Return of the oracle policy: every step survived."""
        return float(self.max_episode_steps)

    def play_oracle(self, seed: int) -> float:
        """Run one oracle episode from ``reset(seed)`` and return its undiscounted return."""
        self.reset(seed)
        total = 0.0
        while True:
            result = self.step(self.oracle_action())
            total += result.reward
            if result.done:
                return total

    def __repr__(self) -> str:
        return f"CorridorDodge(lanes={self.lanes}, length={self.length}, spawn_prob={self.spawn_prob})"
