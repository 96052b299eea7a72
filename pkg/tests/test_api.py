"""Tests for the HTTP API."""

import httpx
import pytest

from src.agents.dqn import AgentConfig, DQNAgent
from src.api.main import app
from src.autodiff import OptimizerConfig
from src.environments import ChainMDP
from src.harness import run_eval
from src.networks import NetworkConfig


@pytest.fixture
async def client():
    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport, base_url="http://test") as c:
        yield c


@pytest.fixture
def checkpoint(tmp_path):
    agent = DQNAgent(
        ChainMDP(),
        AgentConfig(batch_size=8, warmup_steps=16, target_sync_period=10, gamma=0.9),
        NetworkConfig(hidden_widths=[8]),
        OptimizerConfig(learning_rate=1e-3),
        seed=3,
    )
    for _ in agent.run(60):
        pass
    return agent.save(tmp_path / "agent.qlck")


async def test_health(client):
    response = await client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


async def test_index_lists_endpoints(client):
    response = await client.get("/")
    assert response.json()["endpoints"]["evaluate"] == "/evaluate"


async def test_environment_listing(client):
    response = await client.get("/environments")
    assert response.status_code == 200
    listing = {e["name"]: e for e in response.json()["environments"]}
    assert sorted(listing) == ["chain", "corridor", "gridworld"]
    assert listing["chain"]["spec"]["observation_dim"] == 5
    assert listing["chain"]["tabular"] and not listing["corridor"]["tabular"]


async def test_chain_oracle(client):
    response = await client.get("/environments/chain/oracle", params={"gamma": 0.9})
    assert response.status_code == 200
    body = response.json()
    assert body["policy"][:4] == [1, 1, 1, 1]
    assert body["values"][3] == pytest.approx(1.0)


async def test_oracle_errors(client):
    assert (await client.get("/environments/pong/oracle")).status_code == 404
    assert (await client.get("/environments/corridor/oracle")).status_code == 422
    assert (await client.get("/environments/chain/oracle", params={"gamma": 1.5})).status_code == 422


async def test_evaluate_checkpoint(client, checkpoint):
    response = await client.post(
        "/evaluate", json={"checkpoint": str(checkpoint), "episodes": 3, "epsilon": 0.0}
    )
    assert response.status_code == 200
    body = response.json()
    expected = run_eval(checkpoint, episodes=3, epsilon=0.0)
    assert body["returns"] == expected.returns
    assert body["env_name"] == "chain"
    assert body["metadata"]["seed"] == 3


async def test_evaluate_errors(client, checkpoint, tmp_path):
    broken = tmp_path / "broken.qlck"
    broken.write_bytes(b"garbage")
    response = await client.post("/evaluate", json={"checkpoint": str(broken)})
    assert response.status_code == 400

    response = await client.post("/evaluate", json={"checkpoint": str(checkpoint), "env_name": "pong"})
    assert response.status_code == 404
    assert "Available" in response.json()["detail"]

    response = await client.post("/evaluate", json={"checkpoint": str(checkpoint), "episodes": 0})
    assert response.status_code == 422


async def test_evaluate_defaults_come_from_checkpoint(client, tmp_path):
    agent = DQNAgent(
        ChainMDP(),
        AgentConfig(batch_size=8, warmup_steps=16, gamma=0.9),
        NetworkConfig(hidden_widths=[8]),
        seed=5,
    )
    path = agent.save(tmp_path / "meta.qlck", extra={"eval_episodes": 4, "eval_epsilon": 0.25})

    response = await client.post("/evaluate", json={"checkpoint": str(path)})
    assert response.status_code == 200
    body = response.json()
    assert body["episodes"] == 4
    assert body["epsilon"] == 0.25
    assert body["returns"] == run_eval(path).returns
