"""Tests for the Q-networks, aggregators, target sync and checkpoints."""

import struct

import numpy as np
import pytest

from src.autodiff import OptimizerConfig, init_optimizer, optimizer_step
from src.exceptions import CheckpointError, ContractError, DimensionError
from src.networks import (
    Aggregator,
    DuelingParams,
    DuelingQNetwork,
    NetworkConfig,
    NetworkFactory,
    SingleStreamQNetwork,
    greedy_actions,
    load_checkpoint,
    q_forward_dueling,
    q_forward_single,
    save_checkpoint,
    sync_target,
)


def dyadic_params(network, rng):
    """Parameters with few mantissa bits so sums and products are exact."""
    return {
        name: rng.integers(-64, 65, size=shape).astype(np.float64) / 256.0
        for name, shape in network.param_shapes().items()
    }


# ========== forward passes ==========


@pytest.mark.parametrize("kind", ["single", "dueling"])
def test_zero_params_give_zero_q(kind, rng):
    network = NetworkFactory.create_network(NetworkConfig(kind=kind, hidden_widths=[4]), 3, 2)
    out = network.forward(rng.normal(size=(5, 3)), network.zero_params())
    assert np.array_equal(out.q_values, np.zeros((5, 2)))


def test_hand_built_single_stream():
    network = SingleStreamQNetwork(input_dim=2, action_count=2, hidden_widths=(1,))
    params = {
        "theta.0.weight": np.array([[1.0], [2.0]]),
        "theta.0.bias": np.array([0.5]),
        "head.weight": np.array([[2.0, -1.0]]),
        "head.bias": np.array([0.0, 1.0]),
    }
    out = q_forward_single(np.array([1.0, 1.0]), params)
    assert out.q_values.tolist() == [7.0, -2.5]
    assert float(out.v_estimate) == 7.0
    assert greedy_actions(network.q_values(np.array([1.0, 1.0]), params)) == 0


def test_same_seed_same_init():
    network = DuelingQNetwork(4, 3, (8, 8))
    a = network.init_params(np.random.default_rng(5))
    b = network.init_params(np.random.default_rng(5))
    assert all(np.array_equal(a[k], b[k]) for k in a)
    obs = np.ones(4)
    assert np.array_equal(network.q_values(obs, a), network.q_values(obs, b))


def test_init_biases_zero_and_weights_within_glorot_limit():
    network = DuelingQNetwork(6, 3, (10,))
    params = network.init_params(np.random.default_rng(0))
    assert np.array_equal(params["alpha.bias"], np.zeros(3))
    limit = np.sqrt(6.0 / (6 + 10))
    assert np.abs(params["theta.0.weight"]).max() <= limit


def test_observation_width_mismatch(rng):
    network = DuelingQNetwork(3, 2, (4,))
    params = network.init_params(rng)
    with pytest.raises(DimensionError):
        network.forward(np.ones(5), params)


def test_parameter_shape_mismatch_rejected(rng):
    network = DuelingQNetwork(3, 2, (4,))
    params = network.init_params(rng)
    params["beta.weight"] = np.zeros((4, 2))
    with pytest.raises(DimensionError):
        network.forward(np.ones(3), params)


# ========== aggregators ==========


def test_constant_advantage_under_mean_gives_q_equal_v(rng):
    network = DuelingQNetwork(3, 4, (5,), Aggregator.MEAN)
    params = network.init_params(rng)
    params["alpha.weight"] = np.zeros_like(params["alpha.weight"])
    params["alpha.bias"] = np.full(4, 0.37)
    out = network.forward(rng.normal(size=(6, 3)), params)
    assert np.array_equal(out.q_values, np.repeat(out.v_estimate[:, None], 4, axis=1))


def test_aggregator_identities_over_random_draws():
    rng = np.random.default_rng(2024)
    mean_net = DuelingQNetwork(3, 4, (6,), Aggregator.MEAN)
    max_net = DuelingQNetwork(3, 4, (6,), Aggregator.MAX)
    for _ in range(1000):
        params = {name: rng.normal(size=shape) for name, shape in mean_net.param_shapes().items()}
        obs = rng.normal(size=(3, 3))

        out = mean_net.forward(obs, params)
        assert np.all(np.abs(out.q_values.mean(axis=1) - out.v_estimate) < 1e-9)

        out = max_net.forward(obs, params)
        best = np.argmax(out.advantage_raw, axis=1)
        assert np.all(np.abs(out.q_values[np.arange(3), best] - out.v_estimate) < 1e-9)


def test_mean_aggregator_matches_recomputation(rng):
    network = DuelingQNetwork(3, 4, (5,), Aggregator.MEAN)
    params = network.init_params(rng)
    out = network.forward(rng.normal(size=(8, 3)), params)
    adv = out.advantage_raw
    expected = out.v_estimate[:, None] + (adv - adv.mean(axis=1, keepdims=True))
    np.testing.assert_allclose(out.q_values, expected, rtol=0, atol=1e-12)


def test_naive_aggregator_shift_is_exact(rng):
    network = DuelingQNetwork(3, 4, (5,), Aggregator.NAIVE)
    params = dyadic_params(network, rng)
    shifted = dict(params)
    shifted["beta.bias"] = params["beta.bias"] + 0.75
    shifted["alpha.bias"] = params["alpha.bias"] - 0.75
    obs = rng.integers(-16, 17, size=(10, 3)).astype(np.float64) / 16.0
    assert np.array_equal(network.q_values(obs, params), network.q_values(obs, shifted))


def test_mean_aggregator_greedy_invariant_to_advantage_shift(rng):
    network = DuelingQNetwork(3, 4, (5,), Aggregator.MEAN)
    params = network.init_params(rng)
    shifted = dict(params)
    shifted["alpha.bias"] = params["alpha.bias"] + 3.0
    obs = rng.normal(size=(50, 3))
    assert np.array_equal(
        greedy_actions(network.q_values(obs, params)),
        greedy_actions(network.q_values(obs, shifted)),
    )


def test_functional_dueling_forward_matches_network(rng):
    network = DuelingQNetwork(3, 2, (4, 4), Aggregator.MAX)
    params = network.init_params(rng)
    obs = rng.normal(size=(2, 3))
    assert np.array_equal(q_forward_dueling(obs, params, Aggregator.MAX).q_values, network.q_values(obs, params))


def test_dueling_params_split_groups_by_stream(rng):
    network = DuelingQNetwork(3, 2, (4,))
    params = network.init_params(rng)
    split = DuelingParams.split(params)
    assert set(split.theta) == {"theta.0.weight", "theta.0.bias"}
    assert set(split.alpha) == {"alpha.weight", "alpha.bias"}
    assert set(split.beta) == {"beta.weight", "beta.bias"}
    assert list(split.merged()) == list(params)


def test_dueling_params_reject_foreign_names():
    with pytest.raises(ContractError):
        DuelingParams.split({"head.weight": np.zeros((2, 2))})


# ========== target sync ==========


def test_sync_target_gives_identical_outputs(rng):
    network = DuelingQNetwork(4, 3, (8,))
    online = network.init_params(rng)
    target = network.init_params(rng)
    target = sync_target(online, target)
    obs = rng.normal(size=(100, 4))
    assert np.array_equal(network.q_values(obs, online), network.q_values(obs, target))


def test_target_untouched_by_online_updates(rng):
    network = DuelingQNetwork(4, 3, (8,))
    online = network.init_params(rng)
    target = sync_target(online, network.zero_params())
    snapshot = {k: v.copy() for k, v in target.items()}

    state = init_optimizer(online, OptimizerConfig())
    grads = {k: rng.normal(size=v.shape) for k, v in online.items()}
    online, _ = optimizer_step(online, grads, state)

    assert all(np.array_equal(target[k], snapshot[k]) for k in target)
    assert not all(np.array_equal(target[k], online[k]) for k in target)


def test_sync_is_idempotent(rng):
    network = DuelingQNetwork(4, 3, (8,))
    online = network.init_params(rng)
    once = sync_target(online, network.zero_params())
    twice = sync_target(online, once)
    assert all(np.array_equal(once[k], twice[k]) for k in once)


def test_sync_rejects_mismatched_architectures(rng):
    small = DuelingQNetwork(4, 3, (8,)).init_params(rng)
    wide = DuelingQNetwork(4, 3, (9,)).init_params(rng)
    with pytest.raises(DimensionError):
        sync_target(small, wide)
    with pytest.raises(ContractError):
        sync_target(small, SingleStreamQNetwork(4, 3, (8,)).init_params(rng))


# ========== factory ==========


def test_factory_unknown_kind():
    with pytest.raises(ContractError) as info:
        NetworkFactory.create_network(NetworkConfig(kind="recurrent"), 3, 2)
    assert "Available" in str(info.value)


def test_factory_passes_aggregator():
    network = NetworkFactory.create_network(NetworkConfig(aggregator=Aggregator.MAX, hidden_widths=[4]), 3, 2)
    assert isinstance(network, DuelingQNetwork)
    assert network.aggregator == Aggregator.MAX
    rebuilt = NetworkFactory.from_description(network.describe())
    assert rebuilt.describe() == network.describe()


def test_network_config_rejects_empty_trunk():
    with pytest.raises(ValueError):
        NetworkConfig(hidden_widths=[])


# ========== checkpoints ==========


@pytest.mark.parametrize("kind", ["single", "dueling"])
def test_checkpoint_round_trip_is_bit_exact(kind, rng, tmp_path):
    network = NetworkFactory.create_network(NetworkConfig(kind=kind, hidden_widths=[5, 3]), 4, 3)
    params = {k: rng.normal(size=v.shape) for k, v in network.init_params(rng).items()}
    path = save_checkpoint(tmp_path / "net.qlck", network, params, {"seed": 3, "env": "chain"})

    loaded = load_checkpoint(path)
    assert loaded.network.describe() == network.describe()
    assert loaded.metadata == {"seed": 3, "env": "chain"}
    assert all(np.array_equal(loaded.params[k], params[k]) for k in params)
    obs = rng.normal(size=(7, 4))
    assert np.array_equal(loaded.network.q_values(obs, loaded.params), network.q_values(obs, params))


@pytest.fixture
def saved_checkpoint(rng, tmp_path):
    network = DuelingQNetwork(3, 2, (4,))
    return save_checkpoint(tmp_path / "net.qlck", network, network.init_params(rng))


def test_checkpoint_bad_magic(saved_checkpoint):
    raw = bytearray(saved_checkpoint.read_bytes())
    raw[:4] = b"NOPE"
    saved_checkpoint.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(saved_checkpoint)


def test_checkpoint_unknown_version(saved_checkpoint):
    raw = bytearray(saved_checkpoint.read_bytes())
    raw[4:6] = struct.pack("<H", 9)
    saved_checkpoint.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="version 9"):
        load_checkpoint(saved_checkpoint)


def test_checkpoint_truncated_payload(saved_checkpoint):
    saved_checkpoint.write_bytes(saved_checkpoint.read_bytes()[:-8])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(saved_checkpoint)


def test_checkpoint_trailing_bytes(saved_checkpoint):
    saved_checkpoint.write_bytes(saved_checkpoint.read_bytes() + b"\x00")
    with pytest.raises(CheckpointError):
        load_checkpoint(saved_checkpoint)


def test_checkpoint_missing_file(tmp_path):
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "absent.qlck")
