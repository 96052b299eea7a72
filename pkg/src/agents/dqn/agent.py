"""
DQN Agent.

Ties the pieces together: epsilon-greedy acting on an environment, replay
filling, one minibatch gradient step per environment step on the DQN or
maximum-entropy loss, and periodic hard target synchronization.

A run is a deterministic function of its configuration and seed. The seed
is split with ``numpy.random.SeedSequence`` into independent streams for
parameter init, episode start seeds, replay sampling, the behavior policy
and evaluation, so changing how one stream is consumed never shifts another.
"""

import copy
import logging
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Union

import numpy as np

from ...autodiff import OptimizerConfig, init_optimizer, optimizer_step
from ...environments.base import BaseEnvironment
from ...exceptions import ContractError, NotReadyError
from ...losses import compute_loss
from ...networks import (
    BaseQNetwork,
    NetworkConfig,
    copy_params,
    create_network,
    save_checkpoint,
    sync_target,
)
from ...networks.base import ParamMap
from ...replay import ReplayBuffer, Transition
from .schemas import AgentConfig, EvalResult, TrainStats

logger = logging.getLogger(__name__)

DEFAULT_EVAL_EPSILON = 0.01


def epsilon_greedy(q_values: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
    """
    Pick an action from one row of Q-values.

    Exactly one uniform draw decides exploration, plus one more when
    exploring, so the generator advances the same way for any Q-values.

    Raises:
        ContractError: If epsilon is outside [0, 1].
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ContractError(f"epsilon must be in [0, 1], got {epsilon}")
    q_values = np.asarray(q_values, dtype=np.float64).reshape(-1)
    if rng.random() < epsilon:
        return int(rng.integers(q_values.shape[0]))
    return int(np.argmax(q_values))


def select_action(
    obs: np.ndarray,
    network: BaseQNetwork,
    params: ParamMap,
    epsilon: float,
    rng: np.random.Generator,
) -> int:
    """Epsilon-greedy action for one observation; greedy ties go to the lowest index."""
    return epsilon_greedy(network.q_values(obs, params), epsilon, rng)


class EpsilonSchedule:
    """Linear decay from ``start`` to ``end`` over ``decay_steps``, constant afterwards."""

    def __init__(self, start: float, end: float, decay_steps: int):
        if decay_steps < 1:
            raise ContractError(f"decay_steps must be positive, got {decay_steps}")
        self.start = float(start)
        self.end = float(end)
        self.decay_steps = int(decay_steps)

    @classmethod
    def from_config(cls, config: AgentConfig) -> "EpsilonSchedule":
        return cls(config.epsilon_start, config.epsilon_end, config.epsilon_decay_steps)

    def value(self, step: int) -> float:
        if step >= self.decay_steps:
            return self.end
        return self.start + (self.end - self.start) * (step / self.decay_steps)

    __call__ = value


def evaluate(
    network: BaseQNetwork,
    params: ParamMap,
    env: BaseEnvironment,
    episodes: int,
    epsilon_eval: float = DEFAULT_EVAL_EPSILON,
    seed: int = 0,
) -> EvalResult:
    """
    Play fresh episodes and report undiscounted return statistics.

    Episode ``i`` starts from ``env.reset(seed + i)``; exploration draws come
    from a generator seeded with ``seed``.

    Args:
        network: Architecture.
        params: Parameters to evaluate (not modified).
        env: Environment instance (its episode state is overwritten).
        episodes: Number of episodes, >= 1.
        epsilon_eval: Exploration rate while evaluating.
        seed: Base seed.

    Returns:
        EvalResult with mean and population std of the returns.
    """
    if episodes < 1:
        raise ContractError(f"episodes must be >= 1, got {episodes}")
    rng = np.random.default_rng(seed)
    returns = []
    for episode in range(episodes):
        obs = env.reset(seed + episode)
        total = 0.0
        while True:
            result = env.step(select_action(obs, network, params, epsilon_eval, rng))
            total += result.reward
            obs = result.observation
            if result.done:
                break
        returns.append(total)

    values = np.asarray(returns)
    return EvalResult(
        mean=float(values.mean()),
        std=float(values.std()),
        returns=returns,
        episodes=episodes,
        epsilon=epsilon_eval,
    )


class DQNAgent:
    """
    Online/target networks, optimizer, replay buffer and one environment.

    Usage:
        agent = DQNAgent(env, AgentConfig(), NetworkConfig(), OptimizerConfig(), seed=7)
        for stats in agent.run(total_steps=20_000):
            ...
        result = agent.evaluate(episodes=10)
    """

    def __init__(
        self,
        env: BaseEnvironment,
        config: Optional[AgentConfig] = None,
        network_config: Optional[NetworkConfig] = None,
        optimizer_config: Optional[OptimizerConfig] = None,
        seed: int = 0,
    ):
        self.env = env
        self.config = config or AgentConfig()
        net_cfg = network_config or NetworkConfig()
        self.network_config = net_cfg.model_copy(update={"aggregator": self.config.aggregator})
        self.optimizer_config = optimizer_config or OptimizerConfig()
        self.seed = int(seed)

        spec = env.spec
        self.network = create_network(self.network_config, spec.observation_dim, spec.action_count)

        init_seq, env_seq, replay_seq, policy_seq, eval_seq = np.random.SeedSequence(self.seed).spawn(5)
        self.online = self.network.init_params(np.random.default_rng(init_seq))
        self.target = copy_params(self.online)
        self.optimizer = init_optimizer(self.online, self.optimizer_config)
        self.replay = ReplayBuffer(self.config.replay_capacity, seed=replay_seq, action_count=spec.action_count)
        self.env_rng = np.random.default_rng(env_seq)
        self.policy_rng = np.random.default_rng(policy_seq)
        self.eval_seed = int(eval_seq.generate_state(1)[0])
        self.schedule = EpsilonSchedule.from_config(self.config)

        self.step = 0
        self.gradient_steps = 0
        self.episodes = 0
        self.target_syncs = 0
        self.last_episode_return = 0.0
        self._episode_return = 0.0
        self._obs = self._new_episode()

    def _new_episode(self) -> np.ndarray:
        self._episode_return = 0.0
        return self.env.reset(int(self.env_rng.integers(0, 2**31 - 1)))

    @property
    def epsilon(self) -> float:
        return self.schedule(self.step)

    def collect_step(self) -> float:
        """
        Take one epsilon-greedy environment step and store the transition.

        Truncated episode ends are stored as non-terminal so their targets
        keep bootstrapping.

        Returns:
            The epsilon used for the step.
        """
        epsilon = self.epsilon
        action = select_action(self._obs, self.network, self.online, epsilon, self.policy_rng)
        result = self.env.step(action)
        self.replay.push(
            Transition(
                state=self._obs,
                action=action,
                reward=result.reward,
                next_state=result.observation,
                terminal=result.terminal,
            )
        )
        self._episode_return += result.reward
        self.step += 1

        if result.done:
            self.last_episode_return = self._episode_return
            self.episodes += 1
            logger.debug(
                f"Episode {self.episodes} ended at step {self.step}: return {self.last_episode_return:.4f}"
                f"{' (truncated)' if result.truncated else ''}"
            )
            self._obs = self._new_episode()
        else:
            self._obs = result.observation
        return epsilon

    def train_step(self) -> TrainStats:
        """
        One environment step followed by one minibatch gradient step.

        The target network is synced right after the update whenever the
        environment step count is a multiple of ``target_sync_period``.

        Raises:
            NotReadyError: Before ``warmup_steps`` environment steps were collected.
        """
        cfg = self.config
        if self.step < cfg.warmup_steps:
            raise NotReadyError(f"Warm-up not finished: {self.step}/{cfg.warmup_steps} steps collected")

        epsilon = self.collect_step()
        batch = self.replay.sample(cfg.batch_size, gamma=cfg.gamma)
        output = compute_loss(
            batch,
            self.network,
            self.online,
            self.target,
            loss_kind=cfg.loss_kind,
            entropy=cfg.entropy,
            alpha=cfg.entropy.coefficient_at(self.gradient_steps),
            clip_delta=cfg.clip_delta,
        )
        loss_value = output.loss.item()
        grads = output.tape.backward(output.loss)
        self.online, self.optimizer = optimizer_step(self.online, grads, self.optimizer)
        self.gradient_steps += 1

        if self.step % cfg.target_sync_period == 0:
            self.target = sync_target(self.online, self.target)
            self.target_syncs += 1
            if self.target_syncs % 10 == 0:
                logger.info(f"Step {self.step}: target synced ({self.target_syncs} syncs), loss {loss_value:.6f}")

        return TrainStats(
            step=self.step,
            episode_return=self.last_episode_return,
            loss_value=loss_value,
            mean_entropy=output.mean_entropy,
            epsilon=epsilon,
        )

    def run(self, total_steps: int) -> Iterator[TrainStats]:
        """
        Advance until ``total_steps`` environment steps have been taken.

        Warm-up steps only collect; every later step yields its TrainStats.
        """
        if total_steps <= self.config.warmup_steps:
            raise ContractError(
                f"total_steps ({total_steps}) must exceed warmup_steps ({self.config.warmup_steps})"
            )
        logger.info(
            f"Training {self.network!r} with {self.config.loss_kind.value} loss on {self.env.name} "
            f"for {total_steps} steps (seed={self.seed})"
        )
        while self.step < total_steps:
            if self.step < self.config.warmup_steps:
                self.collect_step()
            else:
                yield self.train_step()
        logger.info(f"Finished {self.step} steps, {self.episodes} episodes, {self.target_syncs} target syncs")

    def snapshot(self) -> ParamMap:
        """Copy of the online parameters, safe to hand to another thread."""
        return copy_params(self.online)

    def greedy_policy(self, observations: np.ndarray) -> np.ndarray:
        """Greedy actions for a batch of observations."""
        return np.argmax(self.network.q_values(observations, self.online), axis=-1)

    def evaluate(self, episodes: int = 10, epsilon_eval: float = DEFAULT_EVAL_EPSILON) -> EvalResult:
        """Evaluate the current online parameters on fresh, run-specific seeds."""
        # a private copy keeps the running training episode intact
        env = copy.deepcopy(self.env)
        result = evaluate(self.network, self.snapshot(), env, episodes, epsilon_eval, self.eval_seed)
        logger.info(f"Evaluation over {episodes} episodes: {result.mean:.4f} +/- {result.std:.4f}")
        return result

    def checkpoint_metadata(self, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        metadata: Dict[str, Any] = {
            "seed": self.seed,
            "env": self.env.name,
            "step": self.step,
            "eval_seed": self.eval_seed,
        }
        metadata.update(extra or {})
        return metadata

    def save(self, path: Union[str, Path], extra: Optional[Dict[str, Any]] = None) -> Path:
        return save_checkpoint(path, self.network, self.online, self.checkpoint_metadata(extra))
