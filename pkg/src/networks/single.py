"""
Single-stream Q-network: dense trunk followed by one fully-connected head.
"""

from typing import Dict, Tuple

import numpy as np

from ..autodiff import Node, ops
from .base import BaseQNetwork, ParamMap, QHeads, QOutput


class SingleStreamQNetwork(BaseQNetwork):
    """Traditional one-stream Q-network."""

    kind = "single"

    def param_shapes(self) -> Dict[str, Tuple[int, ...]]:
        shapes = self.trunk_shapes()
        shapes["head.weight"] = (self.hidden_widths[-1], self.action_count)
        shapes["head.bias"] = (self.action_count,)
        return shapes

    def heads(self, obs: Node, params: Dict[str, Node]) -> QHeads:
        hidden = self.trunk(obs, params)
        q = ops.forward_dense(hidden, params["head.weight"], params["head.bias"])
        # v is derived (max over actions) so both network kinds expose the same interface
        v = ops.reduce_max(q, keepdims=True)
        return QHeads(q=q, v=v, advantage=ops.sub(q, v))

    @classmethod
    def from_params(cls, params: ParamMap) -> "SingleStreamQNetwork":
        """Infer the architecture from a parameter map."""
        layers = sum(1 for name in params if name.startswith("theta.") and name.endswith(".weight"))
        widths = tuple(params[f"theta.{layer}.weight"].shape[1] for layer in range(layers))
        input_dim = params["theta.0.weight"].shape[0]
        return cls(input_dim, params["head.weight"].shape[1], widths)


def q_forward_single(obs: np.ndarray, params: ParamMap) -> QOutput:
    """
    Forward pass of a single-stream network described by ``params``.

    Raises:
        DimensionError: If the observation width does not match the trunk input.
    """
    network = SingleStreamQNetwork.from_params(params)
    network.check_params(params)
    return network.forward(obs, params)
