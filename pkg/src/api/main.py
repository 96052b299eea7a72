"""
FastAPI application for dueling-maxent-lab.
"""

import logging
import os
from contextlib import asynccontextmanager

from dotenv import load_dotenv
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from .. import __version__
from ..environments import EnvFactory
from ..harness.config import default_env_name, default_output_dir
from .routes import environments, evaluation, health

load_dotenv()

logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO"),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifecycle."""
    logger.info("Starting dueling-maxent-lab...")
    logger.info(f"Registered environments: {EnvFactory.get_available_envs()}")
    logger.info(f"Default environment: {default_env_name()}")
    logger.info(f"Output directory: {default_output_dir()}")

    yield

    logger.info("Stopping dueling-maxent-lab...")


app = FastAPI(
    title="Dueling Max-Entropy Lab",
    description="Oracle and checkpoint evaluation for dueling Q-networks on toy MDPs",
    version=__version__,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(health.router)
app.include_router(environments.router)
app.include_router(evaluation.router)


@app.get("/")
async def root():
    """Service index."""
    return {
        "service": "dueling-maxent-lab",
        "version": __version__,
        "docs": "/docs",
        "endpoints": {
            "health": "/health",
            "environments": "/environments",
            "oracle": "/environments/{name}/oracle",
            "evaluate": "/evaluate",
        },
    }


# Local run: uvicorn src.api.main:app --reload
if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "src.api.main:app",
        host=os.getenv("HOST", "0.0.0.0"),
        port=int(os.getenv("PORT", 8080)),
        reload=True,
    )
