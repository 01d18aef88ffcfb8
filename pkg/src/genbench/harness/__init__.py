"""Sweep planning, adapter execution, and run evaluation."""

from .planning import (
    DEFAULT_CFG_VALUES,
    DEFAULT_SEED,
    DEFAULT_STEP_VALUES,
    DYNAMIC_STEPS,
    ModelSpec,
    RunKey,
    RunSpec,
    SweepPlan,
    plan_sweep,
    render_prompt,
)
from .runs import RunManifest, execute_run, ingest_directory
from .backends import BackendBinding
from .evaluation import evaluate_run, reference_stats

__all__ = [
    "DEFAULT_CFG_VALUES",
    "DEFAULT_STEP_VALUES",
    "DEFAULT_SEED",
    "DYNAMIC_STEPS",
    "ModelSpec",
    "RunKey",
    "RunSpec",
    "SweepPlan",
    "plan_sweep",
    "render_prompt",
    "RunManifest",
    "execute_run",
    "ingest_directory",
    "BackendBinding",
    "evaluate_run",
    "reference_stats",
]
