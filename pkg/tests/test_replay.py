"""Tests for the replay buffer."""

from collections import deque

import numpy as np
import pytest
from scipy.stats import chi2

from src.exceptions import CheckpointError, ContractError, DimensionError, NotReadyError
from src.replay import ReplayBuffer, Transition, dump_buffer, load_buffer


def make(i: int, dim: int = 2) -> Transition:
    return Transition(
        state=np.full(dim, float(i)),
        action=i % 3,
        reward=float(i),
        next_state=np.full(dim, float(i + 1)),
        terminal=i % 5 == 0,
    )


def key(t: Transition):
    return (tuple(np.asarray(t.state).tolist()), t.action, t.reward, tuple(np.asarray(t.next_state).tolist()), t.terminal)


def keys(buffer: ReplayBuffer):
    return [key(t) for t in buffer.contents()]


def test_push_into_empty_buffer():
    buffer = ReplayBuffer(capacity=4)
    buffer.push(make(1))
    assert len(buffer) == 1
    assert keys(buffer) == [key(make(1))]


def test_evicts_oldest_when_full():
    buffer = ReplayBuffer(capacity=2)
    for i in range(3):
        buffer.push(make(i))
    assert keys(buffer) == [key(make(1)), key(make(2))]


@pytest.mark.parametrize("capacity", [1, 2, 3, 7])
def test_contents_match_bounded_queue(capacity, rng):
    buffer = ReplayBuffer(capacity=capacity)
    oracle = deque(maxlen=capacity)
    for _ in range(4):
        for _ in range(int(rng.integers(0, 3 * capacity + 1))):
            i = int(rng.integers(0, 1000))
            buffer.push(make(i))
            oracle.append(key(make(i)))
            assert len(buffer) == min(buffer.insert_count, capacity)
        assert keys(buffer) == list(oracle)


def test_three_times_capacity_keeps_last_n():
    n = 5
    buffer = ReplayBuffer(capacity=n)
    for i in range(3 * n):
        buffer.push(make(i))
    assert keys(buffer) == [key(make(i)) for i in range(2 * n, 3 * n)]
    assert buffer.insert_count == 3 * n


def test_stored_observations_are_copies():
    buffer = ReplayBuffer(capacity=2)
    state = np.zeros(2)
    buffer.push(Transition(state=state, action=0, reward=0.0, next_state=np.ones(2), terminal=False))
    state[:] = 9.0
    assert buffer.contents()[0].state.tolist() == [0.0, 0.0]


def test_single_item_is_drawn_every_time():
    buffer = ReplayBuffer(capacity=4)
    buffer.push(make(7))
    rewards = [buffer.sample(1).rewards.tolist() for _ in range(3)]
    assert rewards == [[7.0], [7.0], [7.0]]
    with pytest.raises(NotReadyError, match="need 3"):
        buffer.sample(3)


def test_sampling_does_not_mutate_contents():
    buffer = ReplayBuffer(capacity=5, seed=2)
    for i in range(8):
        buffer.push(make(i))
    before = keys(buffer)
    for _ in range(10):
        buffer.sample(4)
    assert keys(buffer) == before


def test_same_seed_same_batches():
    a, b = ReplayBuffer(capacity=10, seed=9), ReplayBuffer(capacity=10, seed=9)
    for i in range(10):
        a.push(make(i))
        b.push(make(i))
    for _ in range(5):
        assert np.array_equal(a.sample(6, gamma=0.5).rewards, b.sample(6, gamma=0.5).rewards)


def test_batch_carries_discount():
    buffer = ReplayBuffer(capacity=3)
    buffer.push(make(0))
    assert buffer.sample(1, gamma=0.7).gamma == 0.7


def test_sampling_is_uniform():
    buffer = ReplayBuffer(capacity=4, seed=0)
    for i in range(4):
        buffer.push(make(i))
    rewards = np.concatenate([buffer.sample(4).rewards for _ in range(2_500)])
    counts = np.bincount(rewards.astype(int), minlength=4)
    statistic = float(((counts - 2500.0) ** 2 / 2500.0).sum())
    assert statistic < chi2.ppf(0.99, df=3)


def test_sample_before_enough_experience():
    buffer = ReplayBuffer(capacity=10)
    buffer.push(make(0))
    with pytest.raises(NotReadyError):
        buffer.sample(2)
    with pytest.raises(ContractError):
        buffer.sample(0)


def test_rejects_malformed_transitions():
    buffer = ReplayBuffer(capacity=3, action_count=3)
    with pytest.raises(ContractError):
        buffer.push(Transition(np.zeros(2), -1, 0.0, np.zeros(2), False))
    with pytest.raises(ContractError):
        buffer.push(Transition(np.zeros(2), 3, 0.0, np.zeros(2), False))
    with pytest.raises(DimensionError):
        buffer.push(Transition(np.zeros(2), 0, 0.0, np.zeros(3), False))
    with pytest.raises(ContractError):
        buffer.push(Transition(np.zeros(2), 0, float("nan"), np.zeros(2), False))
    buffer.push(make(0))
    with pytest.raises(DimensionError):
        buffer.push(make(1, dim=4))
    assert len(buffer) == 1


def test_zero_capacity_rejected():
    with pytest.raises(ContractError):
        ReplayBuffer(capacity=0)


def test_dump_and_load_preserve_order(tmp_path):
    buffer = ReplayBuffer(capacity=4)
    for i in range(6):
        buffer.push(make(i))
    path = dump_buffer(buffer, tmp_path / "replay.dqrb")

    restored = load_buffer(path)
    assert restored.capacity == 4
    assert restored.insert_count == 6
    assert keys(restored) == keys(buffer)

    for i in range(6, 9):
        buffer.push(make(i))
        restored.push(make(i))
        assert keys(restored) == keys(buffer)
    assert restored.insert_count == buffer.insert_count == 9


def test_restored_count_must_fit_contents():
    buffer = ReplayBuffer(capacity=4)
    buffer.push(make(0))
    with pytest.raises(ContractError):
        buffer.restore_insert_count(5)


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / "junk.dqrb"
    path.write_bytes(b"XXXX" + bytes(40))
    with pytest.raises(CheckpointError):
        load_buffer(path)


def test_load_rejects_truncated_dump(tmp_path):
    buffer = ReplayBuffer(capacity=4)
    buffer.push(make(0))
    path = dump_buffer(buffer, tmp_path / "replay.dqrb")
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(CheckpointError):
        load_buffer(path)
