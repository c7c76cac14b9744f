"""Singular spectrum analysis and curriculum-trained neural forecasting."""

from ._core import (
    Network,
    SsannError,
    baseline_train,
    curriculum_train,
    decompose,
    evaluate,
    forward,
    init_network,
    lag_correlation,
    multi_step_predict,
    partial_reconstruction,
    run_cli,
    standardize,
)

__all__ = [
    "Network",
    "SsannError",
    "baseline_train",
    "curriculum_train",
    "decompose",
    "evaluate",
    "forward",
    "init_network",
    "lag_correlation",
    "multi_step_predict",
    "partial_reconstruction",
    "run_cli",
    "standardize",
]
