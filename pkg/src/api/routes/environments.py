"""
Endpoints for the environment registry and the value-iteration oracle.
"""

import asyncio
import logging

from fastapi import APIRouter, HTTPException, Query

from ...environments import EnvFactory, UnknownEnvironmentError
from ...exceptions import ContractError
from ...harness.runner import run_oracle
from ..schemas.responses import EnvironmentInfo, EnvironmentsResponse, OracleResponse

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/environments", tags=["environments"])


@router.get("", response_model=EnvironmentsResponse)
async def list_environments():
    """Registered environments with their default specs."""
    environments = []
    for name in EnvFactory.get_available_envs():
        env = EnvFactory.create_env(name)
        environments.append(EnvironmentInfo(name=name, spec=env.spec, tabular=env.is_tabular))
    return EnvironmentsResponse(environments=environments)


@router.get("/{name}/oracle", response_model=OracleResponse)
async def environment_oracle(
    name: str,
    gamma: float = Query(default=0.99, ge=0, le=1, description="Discount"),
    tol: float = Query(default=1e-10, gt=0, description="Sup-norm tolerance"),
):
    """
    Exact V*, Q* and greedy policy by value iteration.

    404 for unknown environments, 422 for environments without a tabular model.
    """
    try:
        result = await asyncio.to_thread(run_oracle, name, None, gamma, tol)
    except UnknownEnvironmentError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except ContractError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return OracleResponse(**result.model_dump())
