"""
Fixed-capacity experience replay with uniform sampling.

Storage is a ring of preallocated numpy arrays; observations are copied in,
so later changes to environment state never alias stored transitions.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..exceptions import ContractError, DimensionError, NotReadyError
from ..losses.schemas import TDBatch

logger = logging.getLogger(__name__)

DEFAULT_CAPACITY = 50_000


@dataclass(frozen=True)
class Transition:
    """One experience tuple (s, a, r, s', terminal)."""
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    terminal: bool

    def validate(self, action_count: Optional[int] = None) -> None:
        """
        Raises:
            ContractError: On a negative/out-of-range action or a non-finite reward.
            DimensionError: If state and next_state differ in shape.
        """
        state = np.asarray(self.state)
        next_state = np.asarray(self.next_state)
        if state.shape != next_state.shape or state.ndim != 1:
            raise DimensionError("state/next_state must be equal 1-D vectors", state.shape, next_state.shape)
        if self.action < 0 or (action_count is not None and self.action >= action_count):
            raise ContractError(f"action {self.action} outside [0, {action_count})")
        if not np.isfinite(self.reward):
            raise ContractError(f"reward must be finite, got {self.reward}")


class ReplayBuffer:
    """
    FIFO ring buffer of transitions.

    Single writer, single reader. Sampling draws with replacement from the
    buffer's own seeded generator and never mutates the contents.
    """

    def __init__(
        self,
        capacity: int = DEFAULT_CAPACITY,
        seed: int = 0,
        action_count: Optional[int] = None,
    ):
        """
        Initialize an empty buffer.

        Args:
            capacity: Maximum number of stored transitions.
            seed: Seed (or SeedSequence entropy) for the sampling generator.
            action_count: If given, pushed actions are range-checked.
        """
        if capacity < 1:
            raise ContractError(f"capacity must be positive, got {capacity}")
        self.capacity = int(capacity)
        self.action_count = action_count
        self.rng_seed = seed
        self.rng = np.random.default_rng(seed)
        self.insert_count = 0

        self._states: Optional[np.ndarray] = None
        self._next_states: Optional[np.ndarray] = None
        self._actions = np.zeros(self.capacity, dtype=np.int64)
        self._rewards = np.zeros(self.capacity, dtype=np.float64)
        self._terminals = np.zeros(self.capacity, dtype=bool)

    def __len__(self) -> int:
        return min(self.insert_count, self.capacity)

    @property
    def size(self) -> int:
        return len(self)

    @property
    def obs_dim(self) -> Optional[int]:
        return None if self._states is None else self._states.shape[1]

    def push(self, transition: Transition) -> None:
        """
        Store a transition, evicting the oldest one when full.

        Raises:
            ContractError: If the transition is malformed.
            DimensionError: If its observation width differs from stored ones.
        """
        transition.validate(self.action_count)
        state = np.asarray(transition.state, dtype=np.float64)
        if self._states is None:
            self._states = np.zeros((self.capacity, state.shape[0]), dtype=np.float64)
            self._next_states = np.zeros_like(self._states)
        elif state.shape[0] != self._states.shape[1]:
            raise DimensionError("Observation width differs from buffer", state.shape, self._states.shape[1:])

        slot = self.insert_count % self.capacity
        self._states[slot] = state
        self._next_states[slot] = np.asarray(transition.next_state, dtype=np.float64)
        self._actions[slot] = int(transition.action)
        self._rewards[slot] = float(transition.reward)
        self._terminals[slot] = bool(transition.terminal)
        self.insert_count += 1

    def restore_insert_count(self, insert_count: int) -> None:
        """
        Set the lifetime insert count of a buffer refilled oldest-first.

        A full buffer's slots are rotated so the oldest transition sits where
        ``insert_count`` says the next write goes.

        Raises:
            ContractError: If the count is inconsistent with the stored size.
        """
        size = len(self)
        if insert_count < size or (size < self.capacity and insert_count != size):
            raise ContractError(
                f"insert_count {insert_count} is inconsistent with {size} stored of capacity {self.capacity}"
            )
        if self.insert_count != size:
            raise ContractError("restore_insert_count expects a buffer refilled from empty")
        shift = insert_count % self.capacity
        if self._states is not None and shift:
            for name in ("_states", "_next_states", "_actions", "_rewards", "_terminals"):
                setattr(self, name, np.roll(getattr(self, name), shift, axis=0))
        self.insert_count = int(insert_count)

    def _order(self) -> np.ndarray:
        """Storage slots from oldest to newest."""
        if self.insert_count <= self.capacity:
            return np.arange(self.insert_count)
        start = self.insert_count % self.capacity
        return (np.arange(self.capacity) + start) % self.capacity

    def contents(self) -> List[Transition]:
        """Stored transitions, oldest first (copies)."""
        return [self._transition_at(slot) for slot in self._order()]

    def _transition_at(self, slot: int) -> Transition:
        return Transition(
            state=self._states[slot].copy(),
            action=int(self._actions[slot]),
            reward=float(self._rewards[slot]),
            next_state=self._next_states[slot].copy(),
            terminal=bool(self._terminals[slot]),
        )

    def sample(self, batch_size: int, gamma: float = 0.99) -> TDBatch:
        """
        Uniform minibatch, with replacement.

        Args:
            batch_size: Number of transitions.
            gamma: Discount carried by the returned batch.

        Raises:
            ContractError: If batch_size < 1.
            NotReadyError: If fewer than batch_size transitions are stored.
        """
        if batch_size < 1:
            raise ContractError(f"batch_size must be positive, got {batch_size}")
        if len(self) < batch_size:
            raise NotReadyError(f"Replay holds {len(self)} transitions, need {batch_size}")

        slots = self.rng.integers(0, len(self), size=batch_size)
        return TDBatch(
            states=self._states[slots].copy(),
            actions=self._actions[slots].copy(),
            rewards=self._rewards[slots].copy(),
            next_states=self._next_states[slots].copy(),
            terminals=self._terminals[slots].copy(),
            gamma=gamma,
        )

    def snapshot_arrays(self):
        """Oldest-first copies of the stored arrays (states, actions, rewards, next_states, terminals)."""
        order = self._order()
        if self._states is None:
            empty = np.zeros((0, 0))
            return empty, np.zeros(0, np.int64), np.zeros(0), empty, np.zeros(0, bool)
        return (
            self._states[order].copy(),
            self._actions[order].copy(),
            self._rewards[order].copy(),
            self._next_states[order].copy(),
            self._terminals[order].copy(),
        )

    def __repr__(self) -> str:
        return f"ReplayBuffer(size={len(self)}, capacity={self.capacity}, inserted={self.insert_count})"
