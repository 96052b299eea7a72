"""
Golden episode traces.

Text format, one header line then one line per step::

    # duelab-trace v1 env=<name> seed=<n>
    <action> <reward repr> <terminal 0|1> <truncated 0|1> <obs_hash>

``obs_hash`` is the first 16 hex characters of SHA-256 over the float64
bytes of the observation returned by that step.
"""

import hashlib
import logging
import re
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import CheckpointError, ContractError
from .base import BaseEnvironment, StepResult

logger = logging.getLogger(__name__)

TRACE_VERSION = 1
_HEADER = re.compile(r"^# duelab-trace v(\d+) env=(\S+) seed=(-?\d+)$")

Policy = Union[Sequence[int], Callable[[np.ndarray], int]]


def obs_hash(observation: np.ndarray) -> str:
    data = np.ascontiguousarray(observation, dtype="<f8").tobytes()
    return hashlib.sha256(data).hexdigest()[:16]


def format_step(action: int, result: StepResult) -> str:
    return (
        f"{int(action)} {result.reward!r} {int(result.terminal)} "
        f"{int(result.truncated)} {obs_hash(result.observation)}"
    )


def record_trace(
    env: BaseEnvironment,
    seed: int,
    policy: Policy,
    path: Optional[Union[str, Path]] = None,
) -> List[str]:
    """
    Play one episode and render it as trace lines.

    Args:
        env: Environment to play.
        seed: Reset seed.
        policy: Either a fixed action sequence (cycled if the episode runs
            longer) or a callable mapping the current observation to an action.
        path: If given, the trace is also written there.

    Returns:
        Trace lines, header first.
    """
    lines = [f"# duelab-trace v{TRACE_VERSION} env={env.name} seed={int(seed)}"]
    observation = env.reset(seed)
    step = 0
    while True:
        if callable(policy):
            action = int(policy(observation))
        else:
            if len(policy) == 0:
                raise ContractError("Action sequence must not be empty")
            action = int(policy[step % len(policy)])
        result = env.step(action)
        lines.append(format_step(action, result))
        observation = result.observation
        step += 1
        if result.done:
            break

    if path is not None:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info(f"Wrote {step}-step trace for {env.name} (seed={seed}) to {path}")
    return lines


def read_trace(path: Union[str, Path]) -> Tuple[str, int, List[str]]:
    """
    Parse a trace file.

    Returns:
        Tuple (env_name, seed, step_lines).

    Raises:
        CheckpointError: On a malformed header or unsupported version.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise CheckpointError(f"Empty trace file: {path}")
    match = _HEADER.match(lines[0])
    if not match:
        raise CheckpointError(f"Not a duelab trace (bad header): {lines[0]!r}")
    version = int(match.group(1))
    if version != TRACE_VERSION:
        raise CheckpointError(f"Unsupported trace version: found v{version}, expected v{TRACE_VERSION}")
    return match.group(2), int(match.group(3)), [line for line in lines[1:] if line.strip()]


def verify_trace(env: BaseEnvironment, path: Union[str, Path]) -> List[int]:
    """
    Replay a recorded trace's actions and compare every step.

    Returns:
        Indices of mismatching steps; empty means the episode reproduced exactly.

    Raises:
        CheckpointError: On a malformed trace or an environment name mismatch.
    """
    env_name, seed, expected = read_trace(path)
    if env_name != env.name:
        raise CheckpointError(f"Trace was recorded on {env_name}, not {env.name}")

    actions = [int(line.split()[0]) for line in expected]
    env.reset(seed)
    mismatches = []
    for index, (action, line) in enumerate(zip(actions, expected)):
        try:
            result = env.step(action)
        except ContractError:
            mismatches.extend(range(index, len(expected)))
            break
        if format_step(action, result) != line:
            mismatches.append(index)
    if mismatches:
        logger.warning(f"Trace {path} diverged at {len(mismatches)} step(s), first {mismatches[0]}")
    return mismatches
