"""HTTP service: session engine, metrics aggregation, FastAPI app."""

from .app import build_app, parse_action
from .engine import Engine, EngineConfig, default_stage
from .metrics import aggregate, lower_median

__all__ = [
    "Engine",
    "EngineConfig",
    "aggregate",
    "build_app",
    "default_stage",
    "lower_median",
    "parse_action",
]
