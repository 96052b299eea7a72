"""
Response schemas for the API.
"""

from typing import Dict, List

from pydantic import BaseModel, Field

from ...environments import EnvSpec


class HealthResponse(BaseModel):
    """Service health."""
    status: str
    version: str
    default_env: str = Field(description="Environment used when none is given")


class EnvironmentInfo(BaseModel):
    """One registered environment."""
    name: str
    spec: EnvSpec
    tabular: bool = Field(description="Whether the oracle endpoint applies")


class EnvironmentsResponse(BaseModel):
    """Registry listing."""
    environments: List[EnvironmentInfo]


class OracleResponse(BaseModel):
    """Exact V*/Q* of a tabular environment."""
    env_name: str
    gamma: float
    values: List[float]
    q_values: List[List[float]]
    policy: List[int]
    sweeps: int


class EvaluateResponse(BaseModel):
    """Return statistics of a checkpoint evaluation."""
    env_name: str
    mean: float
    std: float
    returns: List[float]
    episodes: int
    epsilon: float
    metadata: Dict[str, object] = Field(default_factory=dict, description="Checkpoint metadata")
