"""Replay - experience replay buffer and its binary dump."""

from .buffer import DEFAULT_CAPACITY, ReplayBuffer, Transition
from .trace import dump_buffer, load_buffer

__all__ = ["DEFAULT_CAPACITY", "ReplayBuffer", "Transition", "dump_buffer", "load_buffer"]
