"""
Tabular MDPs and the exact value-iteration oracle.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ContractError, DimensionError

logger = logging.getLogger(__name__)


@dataclass
class TabularMDP:
    """
    Finite MDP with explicit dynamics.

    ``transition[s, a, s']`` is P(s'|s,a), ``reward_table[s, a]`` is r(s,a).
    Terminal states are absorbing and worth zero.
    """
    transition: np.ndarray
    reward_table: np.ndarray
    terminal_set: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        self.transition = np.asarray(self.transition, dtype=np.float64)
        self.reward_table = np.asarray(self.reward_table, dtype=np.float64)
        self.terminal_set = frozenset(int(s) for s in self.terminal_set)

        if self.transition.ndim != 3 or self.transition.shape[0] != self.transition.shape[2]:
            raise DimensionError("transition must be (S, A, S)", self.transition.shape, ())
        if self.reward_table.shape != self.transition.shape[:2]:
            raise DimensionError("reward_table must be (S, A)", self.reward_table.shape, self.transition.shape[:2])
        if np.any(self.transition < 0) or not np.allclose(self.transition.sum(axis=2), 1.0, rtol=0, atol=1e-12):
            raise ContractError("each P(.|s,a) must be a probability vector (sum 1 +/- 1e-12)")
        if not np.all(np.isfinite(self.reward_table)):
            raise ContractError("rewards must be finite")
        if any(not 0 <= s < self.n_states for s in self.terminal_set):
            raise ContractError(f"terminal states outside [0, {self.n_states})")

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    @property
    def n_actions(self) -> int:
        return self.transition.shape[1]

    @property
    def terminal_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_states, dtype=bool)
        mask[list(self.terminal_set)] = True
        return mask


def bellman_backup(mdp: TabularMDP, values: np.ndarray, gamma: float) -> np.ndarray:
    """``Q(s,a) = r(s,a) + gamma * sum_s' P(s'|s,a) V(s')``, zero at terminal states."""
    q = mdp.reward_table + gamma * (mdp.transition @ values)
    q[mdp.terminal_mask] = 0.0
    return q


def value_iteration(
    mdp: TabularMDP,
    gamma: float,
    tol: float = 1e-10,
    max_sweeps: int = 100_000,
    history: Optional[List[float]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Optimal values by repeated Bellman optimality backups.

    Args:
        mdp: Tabular model.
        gamma: Discount in [0, 1); 1 is accepted only for episodic MDPs.
        tol: Stop when the sup-norm change of V drops below this.
        max_sweeps: Iteration cap.
        history: If given, receives the sup-norm change of every sweep.

    Returns:
        Tuple (V*, Q*) with Q* from one final backup of the converged V.

    Raises:
        ContractError: On invalid gamma/tol or no convergence within max_sweeps.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ContractError(f"gamma must be in [0, 1), got {gamma}")
    if gamma >= 1.0 and not mdp.terminal_set:
        raise ContractError("gamma >= 1 requires an episodic MDP (non-empty terminal set)")
    if tol <= 0:
        raise ContractError(f"tol must be positive, got {tol}")

    values = np.zeros(mdp.n_states, dtype=np.float64)
    for sweep in range(1, max_sweeps + 1):
        updated = bellman_backup(mdp, values, gamma).max(axis=1)
        change = float(np.max(np.abs(updated - values)))
        values = updated
        if history is not None:
            history.append(change)
        if change < tol:
            logger.debug(f"Value iteration converged in {sweep} sweeps (gamma={gamma})")
            return values, bellman_backup(mdp, values, gamma)

    raise ContractError(f"Value iteration did not converge in {max_sweeps} sweeps")


def greedy_policy(q_values: np.ndarray) -> np.ndarray:
    """Per-state argmax; ties go to the lowest action index."""
    return np.argmax(q_values, axis=-1)


def rollout_return(
    mdp: TabularMDP,
    policy: Sequence[int],
    start_state: int,
    max_steps: int,
) -> float:
    """
    Undiscounted return of a deterministic policy on deterministic dynamics.

    Raises:
        ContractError: If a visited transition is stochastic.
    """
    state, total = int(start_state), 0.0
    for _ in range(max_steps):
        if state in mdp.terminal_set:
            break
        action = int(policy[state])
        row = mdp.transition[state, action]
        if np.max(row) != 1.0:
            raise ContractError(f"Stochastic transition at state {state}, action {action}")
        total += float(mdp.reward_table[state, action])
        state = int(np.argmax(row))
    return total
