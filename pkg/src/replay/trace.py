"""
Binary dump of a replay buffer, for debugging.

    magic         4 bytes  b"DQRB"
    version       uint16   currently 1
    obs_dim       uint32
    capacity      uint64
    insert_count  uint64
    size          uint64
    states        size * obs_dim float64
    actions       size int64
    rewards       size float64
    next_states   size * obs_dim float64
    terminals     size uint8

Everything is little-endian and oldest-first.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..exceptions import CheckpointError, ContractError
from .buffer import ReplayBuffer, Transition

logger = logging.getLogger(__name__)

MAGIC = b"DQRB"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHIQQQ")


def dump_buffer(buffer: ReplayBuffer, path: Union[str, Path]) -> Path:
    """Write the buffer contents to ``path``."""
    states, actions, rewards, next_states, terminals = buffer.snapshot_arrays()
    obs_dim = buffer.obs_dim or 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, obs_dim, buffer.capacity, buffer.insert_count, len(buffer)))
        fh.write(states.astype("<f8").tobytes())
        fh.write(actions.astype("<i8").tobytes())
        fh.write(rewards.astype("<f8").tobytes())
        fh.write(next_states.astype("<f8").tobytes())
        fh.write(terminals.astype(np.uint8).tobytes())
    logger.debug(f"Dumped {len(buffer)} transitions to {path}")
    return path


def load_buffer(path: Union[str, Path], seed: int = 0) -> ReplayBuffer:
    """
    Rebuild a buffer from a dump; contents keep their oldest-first order.

    Raises:
        CheckpointError: On bad magic, version or size.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise CheckpointError(f"Replay dump {path} is truncated")
    magic, version, obs_dim, capacity, insert_count, size = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointError(f"Not a replay dump: magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"Unsupported replay dump version {version}; expected {FORMAT_VERSION}")

    expected = _HEADER.size + size * (8 * obs_dim * 2 + 8 + 8 + 1)
    if len(raw) != expected:
        raise CheckpointError(f"Replay dump size {len(raw)} does not match header ({expected}, version {version})")

    offset = _HEADER.size

    def take(count: int, dtype: str) -> np.ndarray:
        nonlocal offset
        width = np.dtype(dtype).itemsize * count
        chunk = np.frombuffer(raw[offset: offset + width], dtype=dtype)
        offset += width
        return chunk

    states = take(size * obs_dim, "<f8").reshape(size, obs_dim)
    actions = take(size, "<i8")
    rewards = take(size, "<f8")
    next_states = take(size * obs_dim, "<f8").reshape(size, obs_dim)
    terminals = take(size, "u1")

    buffer = ReplayBuffer(capacity=capacity, seed=seed)
    for i in range(size):
        buffer.push(
            Transition(
                state=states[i],
                action=int(actions[i]),
                reward=float(rewards[i]),
                next_state=next_states[i],
                terminal=bool(terminals[i]),
            )
        )
    try:
        buffer.restore_insert_count(insert_count)
    except ContractError as e:
        raise CheckpointError(f"Corrupt replay dump header (version {version}): {e}") from e
    return buffer
