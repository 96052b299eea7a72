"""Tests for TD targets, the DQN loss and the entropy-augmented loss."""

import numpy as np
import pytest

from src.autodiff import OptimizerConfig, OptimizerKind, init_optimizer, optimizer_step
from src.exceptions import ContractError
from src.losses import (
    EntropyConfig,
    LossKind,
    TDBatch,
    advantage_entropy,
    compute_loss,
    dqn_loss,
    maxent_loss,
    td_target,
)
from src.networks import Aggregator, DuelingQNetwork, SingleStreamQNetwork


def random_batch(rng, size=6, dim=3, actions=4, gamma=0.9):
    return TDBatch(
        states=rng.normal(size=(size, dim)),
        actions=rng.integers(0, actions, size=size),
        rewards=rng.normal(size=size),
        next_states=rng.normal(size=(size, dim)),
        terminals=rng.random(size) < 0.3,
        gamma=gamma,
    )


def lookup_table_network(table):
    """Single-stream net whose Q-values on one-hot states are exactly ``table``."""
    states, actions = table.shape
    network = SingleStreamQNetwork(states, actions, (states,))
    params = {
        "theta.0.weight": np.eye(states),
        "theta.0.bias": np.zeros(states),
        "head.weight": np.array(table, dtype=np.float64),
        "head.bias": np.zeros(actions),
    }
    return network, params


# ========== td_target ==========


def test_terminal_target_is_reward(small_dueling, rng):
    params = small_dueling.init_params(rng)
    batch = TDBatch(
        states=[[0.0, 1.0, 0.0]],
        actions=[1],
        rewards=[5.0],
        next_states=[[1.0, 0.0, 0.0]],
        terminals=[True],
    )
    assert td_target(batch, small_dueling, params).tolist() == [5.0]


def test_zero_discount_target_is_reward(small_dueling, rng):
    params = small_dueling.init_params(rng)
    batch = random_batch(rng, gamma=0.0)
    assert np.array_equal(td_target(batch, small_dueling, params), batch.rewards)


def test_two_state_bellman_targets():
    network, params = lookup_table_network(np.array([[1.0, 2.0], [3.0, -1.0]]))
    batch = TDBatch(
        states=[[1.0, 0.0], [0.0, 1.0]],
        actions=[0, 1],
        rewards=[0.5, -1.0],
        next_states=[[0.0, 1.0], [1.0, 0.0]],
        terminals=[False, False],
        gamma=0.9,
    )
    np.testing.assert_allclose(td_target(batch, network, params), [0.5 + 0.9 * 3.0, -1.0 + 0.9 * 2.0])


# ========== dqn_loss ==========


def test_zero_error_gives_zero_loss(small_dueling):
    params = small_dueling.zero_params()
    batch = TDBatch(
        states=np.eye(3)[:2], actions=[0, 3], rewards=[0.0, 0.0], next_states=np.eye(3)[1:], terminals=[False, True], gamma=0.0
    )
    assert dqn_loss(batch, small_dueling, params, params).item() == 0.0


def test_single_unit_error(small_dueling):
    params = small_dueling.zero_params()
    batch = TDBatch(states=[[1.0, 0.0, 0.0]], actions=[2], rewards=[1.0], next_states=[[0.0, 0.0, 1.0]], terminals=[True])
    assert dqn_loss(batch, small_dueling, params, params).item() == 1.0


def test_huber_error_bounds_large_errors(small_dueling):
    params = small_dueling.zero_params()
    batch = TDBatch(states=[[1.0, 0.0, 0.0]], actions=[0], rewards=[10.0], next_states=[[1.0, 0.0, 0.0]], terminals=[True])
    assert dqn_loss(batch, small_dueling, params, params, clip_delta=1.0).item() == pytest.approx(9.5)
    assert dqn_loss(batch, small_dueling, params, params).item() == pytest.approx(100.0)


def test_action_out_of_range(small_dueling, rng):
    params = small_dueling.init_params(rng)
    batch = TDBatch(states=[[1.0, 0.0, 0.0]], actions=[4], rewards=[0.0], next_states=[[1.0, 0.0, 0.0]], terminals=[True])
    with pytest.raises(ContractError):
        dqn_loss(batch, small_dueling, params, params)


@pytest.mark.parametrize("kind", [LossKind.DQN, LossKind.MAXENT])
@pytest.mark.parametrize("aggregator", list(Aggregator))
def test_loss_gradients_match_finite_differences(kind, aggregator, rng, finite_difference, assert_grads_close):
    network = DuelingQNetwork(3, 4, (5,), aggregator)
    online = network.init_params(rng)
    online = {k: v + 0.1 * rng.normal(size=v.shape) for k, v in online.items()}
    target = network.init_params(rng)
    batch = random_batch(rng)
    cfg = EntropyConfig(alpha=0.3, temperature=0.8)

    def value(params):
        return compute_loss(batch, network, params, target, kind, cfg, clip_delta=None).loss.item()

    output = compute_loss(batch, network, online, target, kind, cfg)
    analytic = output.tape.backward(output.loss)
    assert_grads_close(analytic, finite_difference(value, online))


def test_random_networks_pass_gradient_check(finite_difference, assert_grads_close):
    for seed in range(20):
        rng = np.random.default_rng(seed)
        aggregator = list(Aggregator)[seed % 3]
        kind = [LossKind.DQN, LossKind.MAXENT][seed % 2]
        network = DuelingQNetwork(3, 3, (4,), aggregator)
        online = {k: rng.normal(scale=0.5, size=v) for k, v in network.param_shapes().items()}
        target = {k: rng.normal(scale=0.5, size=v) for k, v in network.param_shapes().items()}
        batch = random_batch(rng, size=4, actions=3)
        cfg = EntropyConfig(alpha=0.5)

        output = compute_loss(batch, network, online, target, kind, cfg)
        analytic = output.tape.backward(output.loss)
        numeric = finite_difference(
            lambda p: compute_loss(batch, network, p, target, kind, cfg).loss.item(), online
        )
        assert_grads_close(analytic, numeric)


def test_target_params_receive_no_update(small_dueling, rng):
    online = small_dueling.init_params(rng)
    target = small_dueling.init_params(rng)
    frozen = {k: v.copy() for k, v in target.items()}
    batch = random_batch(rng)

    output = compute_loss(batch, small_dueling, online, target, LossKind.MAXENT, EntropyConfig(alpha=0.1))
    grads = output.tape.backward(output.loss)
    online, _ = optimizer_step(online, grads, init_optimizer(online, OptimizerConfig()))

    assert set(grads) == set(online)
    assert all(np.array_equal(target[k], frozen[k]) for k in target)


# ========== maxent_loss ==========


def test_zero_alpha_matches_dqn_exactly(small_dueling, rng):
    online = small_dueling.init_params(rng)
    target = small_dueling.init_params(rng)
    batch = random_batch(rng)

    plain = dqn_loss(batch, small_dueling, online, target)
    regularized = maxent_loss(batch, small_dueling, online, target, EntropyConfig(alpha=0.0))
    assert plain.item() == regularized.item()

    grads_plain = plain.tape.backward(plain)
    grads_reg = regularized.tape.backward(regularized)
    assert all(np.array_equal(grads_plain[k], grads_reg[k]) for k in grads_plain)


def test_larger_alpha_lowers_loss(small_dueling, rng):
    online = small_dueling.init_params(rng)
    batch = random_batch(rng)
    low = maxent_loss(batch, small_dueling, online, online, EntropyConfig(alpha=0.1)).item()
    high = maxent_loss(batch, small_dueling, online, online, EntropyConfig(alpha=0.2)).item()
    assert high < low


def test_entropy_ascent_with_zero_td_error(small_dueling, rng):
    online = small_dueling.init_params(rng)
    states = rng.normal(size=(8, 3))
    actions = rng.integers(0, 4, size=8)
    q = small_dueling.q_values(states, online)
    batch = TDBatch(
        states=states,
        actions=actions,
        rewards=q[np.arange(8), actions],
        next_states=rng.normal(size=(8, 3)),
        terminals=np.zeros(8, dtype=bool),
        gamma=0.0,
    )
    cfg = EntropyConfig(alpha=1.0)

    before = compute_loss(batch, small_dueling, online, online, LossKind.MAXENT, cfg)
    assert before.td_loss == 0.0
    grads = before.tape.backward(before.loss)
    sgd = init_optimizer(online, OptimizerConfig(kind=OptimizerKind.SGD, learning_rate=0.01))
    updated, _ = optimizer_step(online, grads, sgd)

    after = compute_loss(batch, small_dueling, updated, updated, LossKind.MAXENT, cfg)
    assert after.mean_entropy > before.mean_entropy


def test_reported_entropy_is_bounded(small_dueling, rng):
    online = small_dueling.init_params(rng)
    for kind in LossKind:
        output = compute_loss(random_batch(rng), small_dueling, online, online, kind, EntropyConfig(alpha=0.5))
        assert 0.0 <= output.mean_entropy <= np.log(4)


def test_entropy_annealing_schedule():
    cfg = EntropyConfig(alpha=0.1, anneal_steps=10)
    assert cfg.coefficient_at(0) == 0.1
    assert cfg.coefficient_at(5) == pytest.approx(0.05)
    assert cfg.coefficient_at(10) == 0.0
    assert cfg.coefficient_at(20) == 0.0
    assert EntropyConfig(alpha=0.1).coefficient_at(10**6) == 0.1


# ========== advantage_entropy ==========


def test_uniform_advantage_has_maximal_entropy():
    assert advantage_entropy(np.zeros(4)) == pytest.approx(np.log(4), abs=1e-12)


def test_peaked_advantage_has_zero_entropy():
    assert advantage_entropy(np.array([1000.0, 0.0, 0.0, 0.0])) < 1e-9


def test_entropy_direct_evaluation():
    a = np.array([1.0, 2.0, 3.0])
    p = np.exp(a) / np.exp(a).sum()
    assert advantage_entropy(a) == pytest.approx(-(p * np.log(p)).sum(), abs=1e-12)


def test_entropy_needs_two_actions():
    with pytest.raises(ContractError):
        advantage_entropy(np.array([0.3]))


def test_entropy_bounds_over_many_rows(rng):
    values = advantage_entropy(rng.normal(scale=10.0, size=(10_000, 5)))
    assert values.shape == (10_000,)
    assert np.all(values >= 0.0)
    assert np.all(values <= np.log(5))


def test_entropy_shift_invariance(rng):
    rows = rng.normal(size=(20, 4))
    np.testing.assert_allclose(advantage_entropy(rows), advantage_entropy(rows + 42.0), rtol=0, atol=1e-12)


def test_higher_temperature_raises_entropy():
    row = np.array([2.0, 0.0, -1.0])
    assert advantage_entropy(row, EntropyConfig(temperature=5.0)) > advantage_entropy(row)


# ========== TDBatch ==========


def test_batch_rejects_unequal_lengths():
    with pytest.raises(ContractError):
        TDBatch(states=np.zeros((3, 2)), actions=[0, 1], rewards=[0, 0, 0], next_states=np.zeros((3, 2)), terminals=[0, 0, 0])


def test_batch_rejects_empty():
    with pytest.raises(ContractError):
        TDBatch(states=np.zeros((0, 2)), actions=[], rewards=[], next_states=np.zeros((0, 2)), terminals=[])


def test_batch_rejects_bad_discount():
    with pytest.raises(ContractError):
        TDBatch(states=np.zeros((1, 2)), actions=[0], rewards=[0], next_states=np.zeros((1, 2)), terminals=[0], gamma=1.5)
