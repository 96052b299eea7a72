"""
Endpoint for checkpoint evaluation.
"""

import asyncio
import logging
from typing import Any, Dict, Tuple

from fastapi import APIRouter, HTTPException

from ...agents.dqn import EvalResult
from ...environments import UnknownEnvironmentError
from ...exceptions import CheckpointError, ContractError
from ...harness.runner import evaluate_checkpoint
from ...networks import load_checkpoint
from ..schemas.requests import EvaluateRequest
from ..schemas.responses import EvaluateResponse

logger = logging.getLogger(__name__)

router = APIRouter(tags=["evaluation"])


def _load_and_evaluate(request: EvaluateRequest) -> Tuple[Dict[str, Any], str, EvalResult]:
    loaded = load_checkpoint(request.checkpoint)
    env_name, result = evaluate_checkpoint(
        loaded,
        request.env_name,
        request.episodes,
        request.epsilon,
        request.seed,
        request.env_kwargs,
    )
    return loaded.metadata, env_name, result


@router.post("/evaluate", response_model=EvaluateResponse)
async def evaluate_saved_checkpoint(request: EvaluateRequest):
    """
    Play episodes with a saved checkpoint.

    Unset fields fall back to the checkpoint metadata, as ``duelab eval`` does.
    """
    try:
        metadata, env_name, result = await asyncio.to_thread(_load_and_evaluate, request)
    except CheckpointError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except UnknownEnvironmentError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except ContractError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.exception("Checkpoint evaluation failed")
        raise HTTPException(status_code=500, detail=str(e))

    return EvaluateResponse(env_name=env_name, metadata=metadata, **result.model_dump())
