"""
ChainMDP - n states in a line.

Dynamics (actions: 0 = left, 1 = right):
  - start in state 0 (leftmost);
  - left moves to max(s - 1, 0), right moves to s + 1;
  - entering the rightmost state pays ``goal_reward`` (default +1) and terminates;
  - every other step pays ``-step_penalty`` (default 0.01).

The step penalty makes the shortest path the unique optimal policy.
"""

from typing import Tuple

import numpy as np

from ..exceptions import ContractError
from .base import BaseEnvironment, EnvSpec, one_hot
from .tabular import TabularMDP

LEFT, RIGHT = 0, 1


class ChainMDP(BaseEnvironment):
    """Deterministic corridor with the goal at the right end."""

    name = "chain"

    def __init__(
        self,
        n_states: int = 5,
        step_penalty: float = 0.01,
        goal_reward: float = 1.0,
        max_episode_steps: int = 50,
    ):
        super().__init__(max_episode_steps)
        if n_states < 2:
            raise ContractError(f"ChainMDP needs at least 2 states, got {n_states}")
        self.n_states = int(n_states)
        self.step_penalty = float(step_penalty)
        self.goal_reward = float(goal_reward)
        self.state = 0

    @property
    def spec(self) -> EnvSpec:
        return EnvSpec(
            name=self.name,
            observation_dim=self.n_states,
            action_count=2,
            max_episode_steps=self.max_episode_steps,
        )

    @property
    def goal(self) -> int:
        return self.n_states - 1

    def _reset(self) -> np.ndarray:
        self.state = 0
        return one_hot(self.state, self.n_states)

    def _move(self, state: int, action: int) -> Tuple[int, float, bool]:
        next_state = max(state - 1, 0) if action == LEFT else state + 1
        if next_state == self.goal:
            return next_state, self.goal_reward, True
        return next_state, -self.step_penalty, False

    def _transition(self, action: int) -> Tuple[np.ndarray, float, bool]:
        self.state, reward, terminal = self._move(self.state, action)
        return one_hot(self.state, self.n_states), reward, terminal

    @property
    def is_tabular(self) -> bool:
        return True

    def to_tabular(self) -> TabularMDP:
        transition = np.zeros((self.n_states, 2, self.n_states))
        rewards = np.zeros((self.n_states, 2))
        for state in range(self.n_states):
            for action in (LEFT, RIGHT):
                if state == self.goal:
                    transition[state, action, state] = 1.0
                    continue
                next_state, reward, _ = self._move(state, action)
                transition[state, action, next_state] = 1.0
                rewards[state, action] = reward
        return TabularMDP(transition, rewards, frozenset({self.goal}))

    def __repr__(self) -> str:
        return f"ChainMDP(n_states={self.n_states}, step_penalty={self.step_penalty})"
