"""
Entropy of the advantage stream.

The advantage row is mapped to a distribution with a tempered softmax and
its Shannon entropy (natural log) is taken. Softmax is shift invariant, so
raw and centered advantages give the same value.
"""

from typing import Optional, Union

import numpy as np

from ..autodiff import Node, Tape, ops
from ..exceptions import ContractError
from .schemas import EntropyConfig


def entropy_node(advantage: Node, temperature: float = 1.0) -> Node:
    """
    Differentiable ``-sum_a p_a ln p_a`` over the last axis.

    Args:
        advantage: Node of shape ``(|A|,)`` or ``(B, |A|)``.
        temperature: Softmax temperature.

    Returns:
        Scalar node, or ``(B,)`` node for batched input.
    """
    if advantage.shape[-1] < 2:
        raise ContractError(f"Entropy needs at least 2 actions, got {advantage.shape[-1]}")
    probs = ops.softmax(advantage, temperature)
    log_probs = ops.log_softmax(advantage, temperature)
    return ops.neg(ops.reduce_sum(ops.mul(probs, log_probs), axis=-1))


def advantage_entropy(
    advantage_raw: np.ndarray,
    cfg: Optional[EntropyConfig] = None,
) -> Union[float, np.ndarray]:
    """
    Entropy of ``softmax(advantage_raw / tau)``.

    Args:
        advantage_raw: Advantage row ``(|A|,)`` or rows ``(B, |A|)``.
        cfg: Entropy settings (only the temperature is used).

    Returns:
        Float for a single row, ``(B,)`` array otherwise; always in ``[0, ln|A|]``.

    Raises:
        ContractError: If ``|A| < 2``.
    """
    cfg = cfg or EntropyConfig()
    values = np.asarray(advantage_raw, dtype=np.float64)
    tape = Tape()
    entropy = entropy_node(tape.constant(values), cfg.temperature).value
    # rounding can overshoot ln|A| by an ulp near the uniform distribution
    entropy = np.clip(entropy, 0.0, np.log(values.shape[-1]))
    return float(entropy) if entropy.ndim == 0 else entropy
