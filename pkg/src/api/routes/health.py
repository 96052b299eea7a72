"""
Health check endpoint.
"""

from fastapi import APIRouter

from ... import __version__
from ...harness.config import default_env_name
from ..schemas.responses import HealthResponse

router = APIRouter(tags=["health"])


@router.get("/health", response_model=HealthResponse)
async def health_check():
    """Service status and defaults."""
    return HealthResponse(status="healthy", version=__version__, default_env=default_env_name())
