"""API - FastAPI service over the environment registry, oracle and checkpoints."""
