"""
Gradient tape - reverse-mode bookkeeping for small dense networks.

Every primitive in ``ops`` records a ``Node`` on the tape of its operands.
Nodes are appended in evaluation order, so the tape is always topologically
sorted and the backward pass is a single reversed sweep.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ContractError

logger = logging.getLogger(__name__)

VJP = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Node:
    """A float64 array value plus the rule that maps its gradient to its operands."""

    __slots__ = ("value", "parents", "vjp", "name", "tape", "index", "op")

    def __init__(
        self,
        value: np.ndarray,
        tape: "Tape",
        index: int,
        parents: Tuple["Node", ...] = (),
        vjp: Optional[VJP] = None,
        name: Optional[str] = None,
        op: str = "leaf",
    ):
        self.value = value
        self.tape = tape
        self.index = index
        self.parents = parents
        self.vjp = vjp
        self.name = name
        self.op = op

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def item(self) -> float:
        """Scalar value of a one-element node."""
        return float(self.value.reshape(-1)[0])

    # Operator sugar, dispatched to ops to keep the recording in one place
    def __add__(self, other):
        from . import ops
        return ops.add(self, other)

    def __radd__(self, other):
        from . import ops
        return ops.add(other, self)

    def __sub__(self, other):
        from . import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops
        return ops.mul(self, other)

    def __rmul__(self, other):
        from . import ops
        return ops.mul(other, self)

    def __neg__(self):
        from . import ops
        return ops.neg(self)

    def __repr__(self) -> str:
        label = self.name or self.op
        return f"Node({label}, shape={self.shape})"


class Tape:
    """
    Ordered record of primitive operations.

    A tape is single-threaded. Distinct tapes share no state and can be used
    from different threads.
    """

    def __init__(self):
        """Initialize an empty tape."""
        self.nodes: List[Node] = []
        self._watched: Dict[str, Node] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def parameters(self) -> Dict[str, Node]:
        """Watched leaves by name."""
        return dict(self._watched)

    def watch(self, name: str, array: np.ndarray) -> Node:
        """
        Register a trainable leaf.

        Args:
            name: Parameter name; gradients are reported under this key.
            array: Parameter value (copied to float64).

        Returns:
            Leaf node.

        Raises:
            ContractError: If the name is already watched on this tape.
        """
        if name in self._watched:
            raise ContractError(f"Parameter already watched on this tape: {name}")
        node = self._append(np.array(array, dtype=np.float64), (), None, name=name)
        self._watched[name] = node
        return node

    def watch_all(self, params: Dict[str, np.ndarray]) -> Dict[str, Node]:
        """Watch every entry of a parameter map, preserving key order."""
        return {name: self.watch(name, value) for name, value in params.items()}

    def constant(self, array) -> Node:
        """Register a leaf that receives no reported gradient."""
        return self._append(np.asarray(array, dtype=np.float64), (), None, op="const")

    def record(
        self,
        value: np.ndarray,
        parents: Tuple[Node, ...],
        vjp: VJP,
        op: str,
    ) -> Node:
        """
        Append the result of a primitive.

        Raises:
            ContractError: If an operand lives on another tape or the value is not finite.
        """
        for parent in parents:
            if parent.tape is not self:
                raise ContractError(f"{op}: operands recorded on different tapes")
        if not np.all(np.isfinite(value)):
            raise ContractError(f"{op} produced non-finite values")
        return self._append(value, parents, vjp, op=op)

    def backward(self, loss: Node) -> Dict[str, np.ndarray]:
        """
        Reverse sweep from a scalar loss.

        Args:
            loss: Scalar node recorded on this tape.

        Returns:
            Gradient of the loss for every watched parameter (zeros when unreached).
            The tape is reset afterwards.

        Raises:
            ContractError: If the loss is not a scalar or belongs to another tape.
        """
        if loss.tape is not self:
            raise ContractError("Loss node was not recorded on this tape")
        if loss.value.size != 1:
            raise ContractError(f"backward needs a scalar loss, got shape {loss.shape}")

        pending: Dict[int, np.ndarray] = {loss.index: np.ones_like(loss.value)}
        reached: Dict[str, np.ndarray] = {}

        for node in reversed(self.nodes[: loss.index + 1]):
            grad = pending.pop(node.index, None)
            if grad is None:
                continue
            if node.vjp is None:
                if node.name is not None:
                    reached[node.name] = grad
                continue
            for parent, parent_grad in zip(node.parents, node.vjp(grad)):
                if parent_grad is None:
                    continue
                if parent.index in pending:
                    pending[parent.index] = pending[parent.index] + parent_grad
                else:
                    pending[parent.index] = parent_grad

        grads = {
            name: np.array(reached[name], dtype=np.float64)
            if name in reached
            else np.zeros_like(node.value)
            for name, node in self._watched.items()
        }
        self.reset()
        return grads

    def reset(self) -> None:
        """Drop every recorded node."""
        self.nodes.clear()
        self._watched.clear()

    def _append(
        self,
        value: np.ndarray,
        parents: Tuple[Node, ...],
        vjp: Optional[VJP],
        name: Optional[str] = None,
        op: str = "leaf",
    ) -> Node:
        node = Node(value, self, len(self.nodes), parents, vjp, name=name, op=op)
        self.nodes.append(node)
        return node


def backward(tape: Tape, loss_node: Node) -> Dict[str, np.ndarray]:
    """Functional form of ``Tape.backward``."""
    return tape.backward(loss_node)
