"""Gateway API service.

This FastAPI application exposes the command dispatcher over HTTP. A client
posts the same options the command line accepts, with the input document
inline, and receives the same JSON report. Heavy kernels run as Celery
tasks on the configured broker (in-process when none is configured).
"""

from __future__ import annotations

from typing import Any, Dict, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from cli.runner import RunConfig, run
from common import __version__
from common.models import Report, RunStatus

app = FastAPI(
    title="gerbe-lab Gateway API",
    version=__version__,
    description="API для вычисления классов Чеха, склейки гербов и класса Понтрягина.",
)

# Allow all origins for simplicity; adjust for production use
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class RunRequest(RunConfig):
    """Command options plus the input document inline."""

    input: Optional[Dict[str, Any]] = None  # type: ignore[assignment]


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/v1/run", response_model=Report)
def run_endpoint(req: RunRequest) -> Report:
    """Run one command; validation failures are 422, numeric defects come back as a 200 report."""
    config = RunConfig(**req.model_dump(exclude={"input", "output", "format", "verbose"}))
    _, report = run(config, data=req.input)
    if report.status is RunStatus.VALIDATION_FAILURE:
        raise HTTPException(status_code=422, detail=report.model_dump(mode="json"))
    return report
