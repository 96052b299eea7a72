"""
Dueling Q-network.

A shared trunk (theta) feeds two single-layer streams: the advantage stream
(alpha, width |A|) and the value stream (beta, width 1). The aggregator
recombines them:

    naive: Q = V + A
    max:   Q = V + (A - max_a' A)
    mean:  Q = V + (A - mean_a' A)
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..autodiff import Node, ops
from ..exceptions import ContractError, DimensionError
from .base import Aggregator, BaseQNetwork, ParamMap, QHeads, QOutput


@dataclass
class DuelingParams:
    """Parameter groups of a dueling network: trunk, advantage and value streams."""
    theta: ParamMap
    alpha: ParamMap
    beta: ParamMap

    @classmethod
    def split(cls, params: ParamMap) -> "DuelingParams":
        """Group a flat parameter map by stream prefix."""
        groups: Dict[str, ParamMap] = {"theta": {}, "alpha": {}, "beta": {}}
        for name, value in params.items():
            prefix = name.split(".", 1)[0]
            if prefix not in groups:
                raise ContractError(f"Unexpected dueling parameter: {name}")
            groups[prefix][name] = value
        split = cls(**groups)
        split.validate()
        return split

    def merged(self) -> ParamMap:
        """Flat parameter map in trunk, advantage, value order."""
        return {**self.theta, **self.alpha, **self.beta}

    def validate(self) -> None:
        """Check stream widths against each other."""
        layers = sum(1 for name in self.theta if name.endswith(".weight"))
        if layers == 0:
            raise ContractError("Dueling trunk has no layers")
        trunk_width = self.theta[f"theta.{layers - 1}.weight"].shape[1]
        for stream in ("alpha", "beta"):
            weight = getattr(self, stream).get(f"{stream}.weight")
            if weight is None:
                raise ContractError(f"Missing {stream}.weight")
            if weight.shape[0] != trunk_width:
                raise DimensionError(f"{stream} stream input differs from trunk output", weight.shape, (trunk_width,))
        if self.beta["beta.weight"].shape[1] != 1:
            raise DimensionError("Value stream must have width 1", self.beta["beta.weight"].shape, (trunk_width, 1))


class DuelingQNetwork(BaseQNetwork):
    """Dueling architecture with a selectable aggregator."""

    kind = "dueling"

    def __init__(
        self,
        input_dim: int,
        action_count: int,
        hidden_widths: Tuple[int, ...] = (64, 64),
        aggregator: Aggregator = Aggregator.MEAN,
    ):
        super().__init__(input_dim, action_count, hidden_widths)
        self.aggregator = Aggregator(aggregator)

    def param_shapes(self) -> Dict[str, Tuple[int, ...]]:
        shapes = self.trunk_shapes()
        width = self.hidden_widths[-1]
        shapes["alpha.weight"] = (width, self.action_count)
        shapes["alpha.bias"] = (self.action_count,)
        shapes["beta.weight"] = (width, 1)
        shapes["beta.bias"] = (1,)
        return shapes

    def heads(self, obs: Node, params: Dict[str, Node]) -> QHeads:
        hidden = self.trunk(obs, params)
        advantage = ops.forward_dense(hidden, params["alpha.weight"], params["alpha.bias"])
        value = ops.forward_dense(hidden, params["beta.weight"], params["beta.bias"])
        return QHeads(q=aggregate(value, advantage, self.aggregator), v=value, advantage=advantage)

    def describe(self) -> Dict[str, Any]:
        description = super().describe()
        description["aggregator"] = self.aggregator.value
        return description

    @classmethod
    def from_params(cls, params: ParamMap, aggregator: Aggregator) -> "DuelingQNetwork":
        """Infer the architecture from a parameter map."""
        split = DuelingParams.split(params)
        layers = len(split.theta) // 2
        widths = tuple(params[f"theta.{layer}.weight"].shape[1] for layer in range(layers))
        return cls(params["theta.0.weight"].shape[0], params["alpha.weight"].shape[1], widths, aggregator)

    def __repr__(self) -> str:
        return f"{super().__repr__()[:-1]}, aggregator={self.aggregator.value})"


def aggregate(value: Node, advantage: Node, aggregator: Aggregator) -> Node:
    """Combine a ``(..., 1)`` value node with a ``(..., |A|)`` advantage node."""
    if aggregator == Aggregator.NAIVE:
        return ops.add(value, advantage)
    if aggregator == Aggregator.MAX:
        centered = ops.sub(advantage, ops.reduce_max(advantage, keepdims=True))
    elif aggregator == Aggregator.MEAN:
        centered = ops.sub(advantage, ops.reduce_mean(advantage, axis=-1, keepdims=True))
    else:
        raise ContractError(f"Unknown aggregator: {aggregator}")
    return ops.add(value, centered)


def q_forward_dueling(obs: np.ndarray, params: ParamMap, agg: Aggregator) -> QOutput:
    """
    Forward pass of a dueling network described by ``params``.

    Raises:
        DimensionError: If the observation width does not match the trunk input.
    """
    network = DuelingQNetwork.from_params(params, agg)
    network.check_params(params)
    return network.forward(obs, params)
