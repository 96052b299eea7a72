"""
GridWorld - small grid with walls, a goal and optional pits.

Layout characters: ``S`` start, ``.`` floor, ``#`` wall, ``G`` goal, ``X`` pit.
Actions: 0 up, 1 right, 2 down, 3 left. Bumping into a wall or the border
leaves the agent in place. Reaching G pays ``goal_reward`` and terminates,
falling into X pays ``pit_reward`` and terminates, any other step pays
``-step_penalty``. Observations are one-hot over all cells (row-major).
"""

from typing import List, Sequence, Tuple

import numpy as np

from ..exceptions import ContractError
from .base import BaseEnvironment, EnvSpec, one_hot
from .tabular import TabularMDP

DEFAULT_LAYOUT = (
    "S...",
    ".#.X",
    "...G",
)

MOVES = ((-1, 0), (0, 1), (1, 0), (0, -1))


class GridWorld(BaseEnvironment):
    """Deterministic grid navigation."""

    name = "gridworld"

    def __init__(
        self,
        layout: Sequence[str] = DEFAULT_LAYOUT,
        step_penalty: float = 0.01,
        goal_reward: float = 1.0,
        pit_reward: float = -1.0,
        random_start: bool = False,
        max_episode_steps: int = 100,
    ):
        super().__init__(max_episode_steps)
        rows = [str(row) for row in layout]
        if not rows or len({len(row) for row in rows}) != 1:
            raise ContractError("GridWorld layout must be a non-empty rectangle")
        if sum(row.count("S") for row in rows) != 1 or not any("G" in row for row in rows):
            raise ContractError("GridWorld layout needs exactly one S and at least one G")
        if set("".join(rows)) - set("S.#GX"):
            raise ContractError(f"Unknown layout characters: {set(''.join(rows)) - set('S.#GX')}")

        self.layout: List[str] = rows
        self.height, self.width = len(rows), len(rows[0])
        self.step_penalty = float(step_penalty)
        self.goal_reward = float(goal_reward)
        self.pit_reward = float(pit_reward)
        self.random_start = bool(random_start)
        self.start = next(
            self.index(r, c) for r, row in enumerate(rows) for c, ch in enumerate(row) if ch == "S"
        )
        self.position = self.start

    @property
    def spec(self) -> EnvSpec:
        return EnvSpec(
            name=self.name,
            observation_dim=self.height * self.width,
            action_count=4,
            max_episode_steps=self.max_episode_steps,
        )

    def index(self, row: int, col: int) -> int:
        return row * self.width + col

    def cell(self, index: int) -> str:
        return self.layout[index // self.width][index % self.width]

    def start_cells(self) -> List[int]:
        """Cells a random start may choose (floor and S)."""
        return [i for i in range(self.height * self.width) if self.cell(i) in "S."]

    def _reset(self) -> np.ndarray:
        if self.random_start:
            cells = self.start_cells()
            self.position = cells[int(self.rng.integers(len(cells)))]
        else:
            self.position = self.start
        return one_hot(self.position, self.height * self.width)

    def _move(self, position: int, action: int) -> Tuple[int, float, bool]:
        dr, dc = MOVES[action]
        row, col = divmod(position, self.width)
        nr, nc = row + dr, col + dc
        if 0 <= nr < self.height and 0 <= nc < self.width and self.layout[nr][nc] != "#":
            position = self.index(nr, nc)
        kind = self.cell(position)
        if kind == "G":
            return position, self.goal_reward, True
        if kind == "X":
            return position, self.pit_reward, True
        return position, -self.step_penalty, False

    def _transition(self, action: int) -> Tuple[np.ndarray, float, bool]:
        self.position, reward, terminal = self._move(self.position, action)
        return one_hot(self.position, self.height * self.width), reward, terminal

    @property
    def is_tabular(self) -> bool:
        return True

    def to_tabular(self) -> TabularMDP:
        n = self.height * self.width
        transition = np.zeros((n, 4, n))
        rewards = np.zeros((n, 4))
        terminals = set()
        for state in range(n):
            kind = self.cell(state)
            if kind in "#GX":
                # walls are unreachable; goal and pits absorb
                transition[state, :, state] = 1.0
                if kind != "#":
                    terminals.add(state)
                continue
            for action in range(4):
                next_state, reward, _ = self._move(state, action)
                transition[state, action, next_state] = 1.0
                rewards[state, action] = reward
        return TabularMDP(transition, rewards, frozenset(terminals))
