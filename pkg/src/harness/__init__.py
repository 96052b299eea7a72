"""Harness - run configs, train/eval/compare/oracle jobs and the duelab CLI."""

from .config import (
    METHOD_PRESETS,
    CompareRequest,
    RunConfig,
    apply_method,
    format_validation_error,
    load_run_config,
)
from .runner import (
    OracleResult,
    SeedOutcome,
    TrainSummary,
    run_compare,
    evaluate_checkpoint,
    run_eval,
    run_oracle,
    run_train,
    train_seed,
)
from .tables import ComparisonCell, ComparisonTable

__all__ = [
    "METHOD_PRESETS",
    "CompareRequest",
    "RunConfig",
    "apply_method",
    "format_validation_error",
    "load_run_config",
    "OracleResult",
    "SeedOutcome",
    "TrainSummary",
    "run_compare",
    "evaluate_checkpoint",
    "run_eval",
    "run_oracle",
    "run_train",
    "train_seed",
    "ComparisonCell",
    "ComparisonTable",
]
