"""Shared fixtures."""

from typing import Callable, Dict

import numpy as np
import pytest

from src.agents.dqn import AgentConfig
from src.autodiff import OptimizerConfig
from src.harness import RunConfig
from src.networks import Aggregator, DuelingQNetwork, NetworkConfig


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def finite_difference() -> Callable:
    """Central differences of a scalar function of a parameter map."""

    def compute(loss_fn: Callable[[Dict[str, np.ndarray]], float], params: Dict[str, np.ndarray], h: float = 1e-5):
        grads = {}
        for name, value in params.items():
            grad = np.zeros_like(value)
            for index in np.ndindex(value.shape):
                plus = {k: v.copy() for k, v in params.items()}
                minus = {k: v.copy() for k, v in params.items()}
                plus[name][index] += h
                minus[name][index] -= h
                grad[index] = (loss_fn(plus) - loss_fn(minus)) / (2 * h)
            grads[name] = grad
        return grads

    return compute


@pytest.fixture
def assert_grads_close() -> Callable:
    def check(analytic: Dict[str, np.ndarray], numeric: Dict[str, np.ndarray], tol: float = 1e-4):
        assert set(analytic) == set(numeric)
        for name in analytic:
            error = np.abs(analytic[name] - numeric[name]) / np.maximum(1.0, np.abs(numeric[name]))
            assert error.max() < tol, f"{name}: max relative error {error.max():.3e}"

    return check


@pytest.fixture
def small_dueling() -> DuelingQNetwork:
    return DuelingQNetwork(input_dim=3, action_count=4, hidden_widths=(5,), aggregator=Aggregator.MEAN)


@pytest.fixture
def quick_config(tmp_path) -> Callable[..., RunConfig]:
    """Short chain run; keyword arguments override top-level fields."""

    def build(**overrides) -> RunConfig:
        data = dict(
            env_name="chain",
            agent=AgentConfig(
                batch_size=16,
                warmup_steps=100,
                target_sync_period=50,
                epsilon_decay_steps=1000,
                gamma=0.9,
            ),
            net=NetworkConfig(hidden_widths=[16, 16]),
            optimizer=OptimizerConfig(learning_rate=1e-3),
            total_steps=2000,
            seeds=[0],
            output_dir=str(tmp_path / "runs"),
            eval_episodes=3,
            eval_epsilon=0.0,
        )
        data.update(overrides)
        return RunConfig(**data)

    return build


@pytest.fixture
def chain_learning_config(tmp_path) -> Callable[..., RunConfig]:
    """Settings under which the 5-state chain is solved within 20k steps."""

    def build(**overrides) -> RunConfig:
        data = dict(
            env_name="chain",
            agent=AgentConfig(
                batch_size=32,
                warmup_steps=500,
                target_sync_period=100,
                epsilon_decay_steps=5000,
                gamma=0.9,
            ),
            net=NetworkConfig(hidden_widths=[32, 32]),
            optimizer=OptimizerConfig(learning_rate=1e-3),
            total_steps=20_000,
            seeds=[7],
            output_dir=str(tmp_path / "chain"),
            eval_episodes=10,
            eval_epsilon=0.0,
        )
        data.update(overrides)
        return RunConfig(**data)

    return build
