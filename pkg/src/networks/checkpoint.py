"""
Checkpoint save/load.

Layout (all integers little-endian):

    magic            4 bytes  b"DQCK"
    version          uint16   currently 1
    header_length    uint32   length of the JSON header in bytes
    header           UTF-8 JSON: {"network": {...}, "params": [[name, shape], ...],
                                  "metadata": {...}}
    payload          every parameter as float64 row-major, in header order

Round trips are bit-exact.
"""

import json
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from ..exceptions import CheckpointError
from .base import BaseQNetwork, ParamMap
from .factory import NetworkFactory

logger = logging.getLogger(__name__)

MAGIC = b"DQCK"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sHI")


@dataclass
class Checkpoint:
    """A network description, its parameters and free-form run metadata."""
    network: BaseQNetwork
    params: ParamMap
    metadata: Dict[str, Any] = field(default_factory=dict)


def save_checkpoint(
    path: Union[str, Path],
    network: BaseQNetwork,
    params: ParamMap,
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write a checkpoint.

    Args:
        path: Destination file.
        network: Architecture the parameters belong to.
        params: Parameter map (validated against ``network``).
        metadata: JSON-serializable extras (seed, env, ...).

    Returns:
        The written path.
    """
    network.check_params(params)
    order = list(network.param_shapes())
    header = {
        "network": network.describe(),
        "params": [[name, list(params[name].shape)] for name in order],
        "metadata": metadata or {},
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(_PREFIX.pack(MAGIC, FORMAT_VERSION, len(header_bytes)))
        fh.write(header_bytes)
        for name in order:
            fh.write(np.ascontiguousarray(params[name], dtype="<f8").tobytes())

    logger.debug(f"Saved checkpoint {path} ({len(order)} arrays)")
    return path


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """
    Read a checkpoint written by ``save_checkpoint``.

    Raises:
        CheckpointError: On bad magic, unsupported version, truncated data or a
            header inconsistent with its network description.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}") from e

    if len(raw) < _PREFIX.size:
        raise CheckpointError(f"Checkpoint {path} is truncated ({len(raw)} bytes)")
    magic, version, header_length = _PREFIX.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointError(f"Not a checkpoint: magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise CheckpointError(
            f"Unsupported checkpoint version {version}; this build reads version {FORMAT_VERSION}"
        )

    offset = _PREFIX.size
    try:
        header = json.loads(raw[offset: offset + header_length].decode("utf-8"))
        network = NetworkFactory.from_description(header["network"])
        layout = [(name, tuple(shape)) for name, shape in header["params"]]
    except (ValueError, KeyError, TypeError) as e:
        raise CheckpointError(f"Corrupt checkpoint header (version {version}): {e}") from e
    offset += header_length

    params: ParamMap = {}
    for name, shape in layout:
        count = int(np.prod(shape, dtype=np.int64))
        end = offset + 8 * count
        if end > len(raw):
            raise CheckpointError(f"Checkpoint payload truncated at {name} (version {version})")
        params[name] = np.frombuffer(raw[offset:end], dtype="<f8").astype(np.float64).reshape(shape)
        offset = end
    if offset != len(raw):
        raise CheckpointError(f"Checkpoint has {len(raw) - offset} trailing bytes (version {version})")

    try:
        network.check_params(params)
    except ValueError as e:
        raise CheckpointError(f"Checkpoint parameters do not match its network: {e}") from e

    return Checkpoint(network=network, params=params, metadata=header.get("metadata", {}))
