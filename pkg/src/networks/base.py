"""
Base Q-network - common interface for every Q-value approximator.

Networks are stateless descriptions of an architecture. Parameters live in
plain ``Dict[str, np.ndarray]`` maps so online and target copies can share
one network object and be snapshotted, copied or sent between threads freely.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..autodiff import Node, Tape, ops
from ..exceptions import ContractError, DimensionError

logger = logging.getLogger(__name__)

ParamMap = Dict[str, np.ndarray]


class Aggregator(str, Enum):
    """Rule combining the value and advantage streams."""
    NAIVE = "naive"
    MAX = "max"
    MEAN = "mean"


class NetworkConfig(BaseModel):
    """Architecture settings for a Q-network."""
    kind: str = Field(default="dueling", description="Registered network kind: single or dueling")
    hidden_widths: List[int] = Field(
        default_factory=lambda: [64, 64],
        description="Widths of the shared dense trunk layers",
    )
    aggregator: Aggregator = Field(
        default=Aggregator.MEAN,
        description="Stream aggregator (ignored by single-stream networks)",
    )

    @field_validator("hidden_widths")
    @classmethod
    def _positive_widths(cls, value: List[int]) -> List[int]:
        if not value or any(width < 1 for width in value):
            raise ValueError("hidden_widths must be a non-empty list of positive integers")
        return value


@dataclass
class QOutput:
    """Q-values with the value estimate and the uncentered advantage stream."""
    q_values: np.ndarray
    v_estimate: np.ndarray
    advantage_raw: np.ndarray


@dataclass
class QHeads:
    """Taped counterpart of QOutput, used when gradients are needed."""
    q: Node
    v: Node
    advantage: Node


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """Uniform in ``[-sqrt(6 / (fan_in + fan_out)), +sqrt(...)]``."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class BaseQNetwork(ABC):
    """
    Abstract base class for Q-networks.

    Subclasses declare their parameter shapes and build the taped forward
    pass; everything else (init, validation, untaped evaluation) is shared.
    """

    kind: str = "base"

    def __init__(
        self,
        input_dim: int,
        action_count: int,
        hidden_widths: Tuple[int, ...] = (64, 64),
    ):
        """
        Initialize the architecture.

        Args:
            input_dim: Observation width.
            action_count: Number of discrete actions.
            hidden_widths: Widths of the shared trunk layers.
        """
        if input_dim < 1 or action_count < 1:
            raise ContractError(
                f"input_dim and action_count must be positive, got {input_dim}, {action_count}"
            )
        if not hidden_widths or any(width < 1 for width in hidden_widths):
            raise ContractError(f"Invalid hidden widths: {hidden_widths}")
        self.input_dim = int(input_dim)
        self.action_count = int(action_count)
        self.hidden_widths = tuple(int(width) for width in hidden_widths)

    # ---------- architecture ----------

    def trunk_shapes(self) -> Dict[str, Tuple[int, ...]]:
        """Shapes of the shared dense trunk (theta)."""
        shapes: Dict[str, Tuple[int, ...]] = {}
        fan_in = self.input_dim
        for layer, width in enumerate(self.hidden_widths):
            shapes[f"theta.{layer}.weight"] = (fan_in, width)
            shapes[f"theta.{layer}.bias"] = (width,)
            fan_in = width
        return shapes

    @abstractmethod
    def param_shapes(self) -> Dict[str, Tuple[int, ...]]:
        """All parameter shapes, in a fixed order."""

    @abstractmethod
    def heads(self, obs: Node, params: Dict[str, Node]) -> QHeads:
        """
        Taped forward pass.

        Args:
            obs: Observation node of shape ``(d,)`` or ``(B, d)``.
            params: Parameter nodes on the same tape.

        Returns:
            QHeads with q, v and raw advantage nodes.
        """

    def describe(self) -> Dict[str, Any]:
        """Serializable architecture description."""
        return {
            "kind": self.kind,
            "input_dim": self.input_dim,
            "action_count": self.action_count,
            "hidden_widths": list(self.hidden_widths),
        }

    # ---------- parameters ----------

    def init_params(self, rng: np.random.Generator) -> ParamMap:
        """
        Draw fresh parameters: Glorot-uniform weights, zero biases.

        Args:
            rng: Seeded generator; the draw order follows ``param_shapes``.

        Returns:
            New parameter map.
        """
        params: ParamMap = {}
        for name, shape in self.param_shapes().items():
            if name.endswith(".bias"):
                params[name] = np.zeros(shape, dtype=np.float64)
            else:
                params[name] = glorot_uniform(rng, shape[0], shape[1])
        return params

    def zero_params(self) -> ParamMap:
        """All-zero parameter map (useful for hand-built nets)."""
        return {name: np.zeros(shape) for name, shape in self.param_shapes().items()}

    def check_params(self, params: ParamMap) -> None:
        """
        Validate a parameter map against the architecture.

        Raises:
            ContractError: If keys differ.
            DimensionError: If a shape differs.
        """
        expected = self.param_shapes()
        if set(expected) != set(params):
            raise ContractError(
                f"Parameter keys do not match {self.kind} network: "
                f"{sorted(set(expected) ^ set(params))}"
            )
        for name, shape in expected.items():
            if params[name].shape != shape:
                raise DimensionError(f"Parameter {name} has wrong shape", params[name].shape, shape)

    # ---------- forward ----------

    def trunk(self, obs: Node, params: Dict[str, Node]) -> Node:
        """Shared dense layers with rectifier nonlinearity."""
        if obs.shape[-1] != self.input_dim:
            raise DimensionError("Observation width does not match network input", obs.shape, (self.input_dim,))
        hidden = obs
        for layer in range(len(self.hidden_widths)):
            hidden = ops.relu(
                ops.forward_dense(
                    hidden,
                    params[f"theta.{layer}.weight"],
                    params[f"theta.{layer}.bias"],
                )
            )
        return hidden

    def forward(self, obs: np.ndarray, params: ParamMap, tape: Optional[Tape] = None) -> QOutput:
        """
        Evaluate without recording gradients.

        Args:
            obs: Observation ``(d,)`` or batch ``(B, d)``.
            params: Parameter map.
            tape: Optional scratch tape to record on.

        Returns:
            QOutput of numpy arrays.
        """
        self.check_params(params)
        tape = Tape() if tape is None else tape
        obs_node = tape.constant(np.asarray(obs, dtype=np.float64))
        nodes = {name: tape.constant(value) for name, value in params.items()}
        heads = self.heads(obs_node, nodes)
        return QOutput(
            q_values=heads.q.value,
            v_estimate=np.squeeze(heads.v.value, axis=-1),
            advantage_raw=heads.advantage.value,
        )

    def q_values(self, obs: np.ndarray, params: ParamMap) -> np.ndarray:
        """Shortcut returning only the Q-values."""
        return self.forward(obs, params).q_values

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(input_dim={self.input_dim}, "
            f"actions={self.action_count}, hidden={list(self.hidden_widths)})"
        )


def greedy_actions(q_values: np.ndarray) -> np.ndarray:
    """Argmax over the last axis; ties go to the lowest action index."""
    return np.argmax(q_values, axis=-1)


def sync_target(online: ParamMap, target: ParamMap) -> ParamMap:
    """
    Hard copy of the online parameters into a new target map.

    Args:
        online: Online network parameters.
        target: Current target parameters (shape reference only).

    Returns:
        Exact copy of ``online``.

    Raises:
        ContractError: If the key sets differ.
        DimensionError: If any shape differs.
    """
    if set(online) != set(target):
        raise ContractError(f"Online/target parameter keys differ: {sorted(set(online) ^ set(target))}")
    for name, value in online.items():
        if value.shape != target[name].shape:
            raise DimensionError(f"Online/target shape mismatch for {name}", value.shape, target[name].shape)
    return {name: value.copy() for name, value in online.items()}


def copy_params(params: ParamMap) -> ParamMap:
    """Deep copy of a parameter map (an immutable snapshot by convention)."""
    return {name: value.copy() for name, value in params.items()}
