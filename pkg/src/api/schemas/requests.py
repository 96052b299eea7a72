"""
Request schemas for the API.
"""

from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class EvaluateRequest(BaseModel):
    """Request to evaluate a saved checkpoint."""
    checkpoint: str = Field(description="Path of a .qlck checkpoint readable by the server")
    env_name: Optional[str] = Field(
        default=None, description="Environment (default: the one recorded in the checkpoint)"
    )
    env_kwargs: Optional[Dict[str, Any]] = Field(
        default=None, description="Environment constructor arguments"
    )
    episodes: Optional[int] = Field(
        default=None, ge=1, le=10_000, description="Number of episodes (default: from the checkpoint)"
    )
    epsilon: Optional[float] = Field(
        default=None, ge=0, le=1, description="Exploration rate (default: from the checkpoint)"
    )
    seed: Optional[int] = Field(
        default=None, description="Base seed (default: the checkpoint's evaluation seed)"
    )
