"""
Temporal-difference targets and losses.

    y_i  = r_i                                  (terminal)
    y_i  = r_i + gamma * max_a' Q(s'_i, a'; target)   (otherwise)
    DQN  = mean_i (y_i - Q(s_i, a_i; online))**2
    ME   = DQN - alpha * mean_i H(softmax(A(s_i, .) / tau))

Targets are numpy constants, so no gradient reaches the target parameters.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..autodiff import Node, Tape, ops
from ..networks.base import BaseQNetwork, ParamMap
from .entropy import advantage_entropy, entropy_node
from .schemas import EntropyConfig, LossKind, TDBatch

logger = logging.getLogger(__name__)


@dataclass
class LossOutput:
    """Loss node plus the scalar diagnostics reported in training stats."""
    loss: Node
    tape: Tape
    td_loss: float
    mean_entropy: float


def td_target(batch: TDBatch, network: BaseQNetwork, target_params: ParamMap) -> np.ndarray:
    """
    Bootstrapped regression targets from the target network.

    Args:
        batch: Transitions and discount.
        network: Architecture (carries the aggregator).
        target_params: Frozen target parameters.

    Returns:
        ``(B,)`` array of targets.
    """
    q_next = network.q_values(batch.next_states, target_params)
    bootstrap = np.where(batch.terminals, 0.0, np.max(q_next, axis=-1))
    return batch.rewards + batch.gamma * bootstrap


def compute_loss(
    batch: TDBatch,
    network: BaseQNetwork,
    online_params: ParamMap,
    target_params: ParamMap,
    loss_kind: LossKind = LossKind.DQN,
    entropy: Optional[EntropyConfig] = None,
    alpha: Optional[float] = None,
    clip_delta: Optional[float] = None,
) -> LossOutput:
    """
    Build the configured loss on a fresh tape watching ``online_params``.

    Args:
        batch: Minibatch.
        network: Architecture shared by online and target parameters.
        online_params: Trainable parameters.
        target_params: Frozen parameters used for the targets.
        loss_kind: DQN or MaxEnt.
        entropy: Regularizer settings (MaxEnt, and the reported entropy temperature).
        alpha: Overrides ``entropy.alpha`` (used for annealing).
        clip_delta: If set, Huber error with this threshold instead of the squared error.

    Returns:
        LossOutput; call ``output.tape.backward(output.loss)`` for gradients.

    Raises:
        ContractError: If an action index is out of range.
    """
    entropy = entropy or EntropyConfig()
    targets = td_target(batch, network, target_params)

    tape = Tape()
    nodes = tape.watch_all(online_params)
    heads = network.heads(tape.constant(batch.states), nodes)
    q_taken = ops.gather(heads.q, batch.actions)
    error = ops.sub(tape.constant(targets), q_taken)
    per_sample = ops.huber(error, clip_delta) if clip_delta else ops.square(error)
    td_loss = ops.reduce_mean(per_sample)

    coefficient = entropy.alpha if alpha is None else alpha
    loss = td_loss
    if loss_kind == LossKind.MAXENT and coefficient > 0:
        mean_entropy = ops.reduce_mean(entropy_node(heads.advantage, entropy.temperature))
        loss = ops.sub(td_loss, ops.scale(mean_entropy, coefficient))
        reported = float(np.clip(mean_entropy.item(), 0.0, np.log(network.action_count)))
    else:
        reported = float(np.mean(advantage_entropy(heads.advantage.value, entropy)))

    return LossOutput(loss=loss, tape=tape, td_loss=td_loss.item(), mean_entropy=reported)


def dqn_loss(
    batch: TDBatch,
    network: BaseQNetwork,
    online_params: ParamMap,
    target_params: ParamMap,
    clip_delta: Optional[float] = None,
) -> Node:
    """Squared TD error averaged over the batch, as a scalar node."""
    return compute_loss(batch, network, online_params, target_params, clip_delta=clip_delta).loss


def maxent_loss(
    batch: TDBatch,
    network: BaseQNetwork,
    online_params: ParamMap,
    target_params: ParamMap,
    cfg: EntropyConfig,
    clip_delta: Optional[float] = None,
) -> Node:
    """
    DQN loss minus ``alpha`` times the mean advantage entropy.

    Minimizing it maximizes entropy; with ``alpha == 0`` the graph is the
    DQN graph itself.
    """
    return compute_loss(
        batch,
        network,
        online_params,
        target_params,
        loss_kind=LossKind.MAXENT,
        entropy=cfg,
        clip_delta=clip_delta,
    ).loss
