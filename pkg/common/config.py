"""Runtime settings.

Configuration is read from environment variables so that the same code runs
from the command line, inside a Celery worker started by docker-compose, and
under pytest. Every variable has a default suitable for local runs.

Usage::

    from common.config import get_settings
    tol = get_settings().tol
"""

from __future__ import annotations

import os
from functools import lru_cache
from typing import Literal

from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Frozen view of the environment."""

    model_config = {"frozen": True}

    tol: float = Field(1e-9, gt=0)
    grid: int = Field(24, ge=8)
    seed: int = 0
    parallel: Literal["local", "celery"] = "local"
    task_timeout: float = Field(600.0, gt=0)
    pi2_tol: float = Field(5e-3, gt=0)
    delta_tol: float = Field(1e-2, gt=0)
    integrality_tol: float = Field(0.1, gt=0)
    broker_url: str = "memory://"
    result_backend: str = "cache+memory://"
    always_eager: bool = True


def _flag(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def load_settings() -> Settings:
    """Build settings from the current environment."""
    broker_url = os.getenv("CELERY_BROKER_URL", "memory://")
    return Settings(
        tol=float(os.getenv("GERBE_TOL", 1e-9)),
        grid=int(os.getenv("GERBE_GRID", 24)),
        seed=int(os.getenv("GERBE_SEED", 0)),
        parallel=os.getenv("GERBE_PARALLEL", "local"),
        task_timeout=float(os.getenv("GERBE_TASK_TIMEOUT", 600)),
        pi2_tol=float(os.getenv("GERBE_PI2_TOL", 5e-3)),
        delta_tol=float(os.getenv("GERBE_DELTA_TOL", 1e-2)),
        integrality_tol=float(os.getenv("GERBE_INTEGRALITY_TOL", 0.1)),
        broker_url=broker_url,
        result_backend=os.getenv("CELERY_RESULT_BACKEND", "cache+memory://"),
        always_eager=_flag(os.getenv("CELERY_TASK_ALWAYS_EAGER", "1")),
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
