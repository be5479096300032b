"""Dispatcher shared by the command line and the HTTP gateway.

``run`` takes a validated :class:`RunConfig` plus the parsed input document,
calls the named module operation through its Celery task and wraps the
outcome in a :class:`common.models.Report`. The exit code is derived from the
report status: 0 for ``ok``, 1 for ``validation_failure`` and 2 for
``numeric_defect``.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from celery.utils.log import get_logger
from pydantic import BaseModel, Field, ValidationError, field_validator

from cech.cochain import Cochain, delta
from cech.complex import Complex
from cech.tasks import circle_class_task, cohomology_task, trivialize_task
from common import __version__, angles
from common.config import get_settings
from common.errors import GerbeLabError, NumericDefectExceeded, SchemaError
from common.models import CheckReport, CochainSchema, Command, ComplexSchema, Report, RunStatus
from descent.tasks import glue_task
from pathsu2.tasks import pi2_demo_task
from pontryagin.pipeline import DEFAULT_ARC_STEPS
from pontryagin.tasks import compute_p1_task
from twogerbe.tasks import validate_task as coherence_task

logger = get_logger(__name__)

EXIT_CODES = {RunStatus.OK: 0, RunStatus.VALIDATION_FAILURE: 1, RunStatus.NUMERIC_DEFECT: 2}

# commands that read a JSON document
NEEDS_INPUT = {
    Command.COHOMOLOGY,
    Command.GERBE_CLASS,
    Command.TRIVIALIZE,
    Command.GLUE,
    Command.COHERENCE_CHECK,
}


class RunConfig(BaseModel):
    command: Command
    input: Optional[str] = None
    grid: int = Field(default_factory=lambda: get_settings().grid, ge=8)
    tol: Optional[float] = Field(None, gt=0)
    seed: int = Field(default_factory=lambda: get_settings().seed)
    output: Optional[str] = None
    format: str = Field("json", pattern="^(json|text)$")
    verbose: bool = False
    degree: Optional[int] = Field(None, ge=0)
    k: int = 1
    chains: int = Field(5, ge=1)
    arc_steps: int = Field(DEFAULT_ARC_STEPS, ge=1)

    @field_validator("grid")
    @classmethod
    def _grid_multiple_of_four(cls, value: int) -> int:
        if value % 4:
            raise ValueError("grid must be divisible by 4")
        return value


Outcome = Tuple[Dict[str, Any], Dict[str, float], RunStatus]
Handler = Callable[[RunConfig, Optional[Dict[str, Any]]], Outcome]


def load_input(config: RunConfig) -> Optional[Dict[str, Any]]:
    if config.input is None:
        return None
    path = Path(config.input)
    if not path.is_file():
        raise SchemaError("input file not found", {"input": config.input})
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError("input is not valid JSON", {"input": config.input, "line": exc.lineno}) from exc


def _tol(config: RunConfig) -> float:
    return get_settings().tol if config.tol is None else config.tol


def _cochain_document(data: Dict[str, Any]) -> Tuple[Dict[str, Any], Dict[str, Any], Cochain]:
    schema = CochainSchema.model_validate(data)
    if schema.complex is None:
        raise SchemaError("cochain document must embed its complex", {"field": "complex"})
    complex_json = schema.complex.model_dump()
    cochain_json = schema.model_dump(mode="json", exclude={"complex"})
    return complex_json, cochain_json, Cochain.from_json(Complex.from_json(complex_json), cochain_json)


def _delta_defect(g: Cochain) -> float:
    if g.degree >= g.complex.dim:
        return 0.0
    return angles.max_dist(delta(g).values)


def _cohomology(config: RunConfig, data: Dict[str, Any]) -> Outcome:
    complex_json = ComplexSchema.model_validate(data).model_dump()
    if config.degree is not None:
        return cohomology_task.apply(args=[complex_json, config.degree]).get(), {}, RunStatus.OK
    K = Complex.from_json(complex_json)
    degrees = [cohomology_task.apply(args=[complex_json, k]).get() for k in range(K.dim + 1)]
    return {"degrees": degrees}, {}, RunStatus.OK


def _gerbe_class(config: RunConfig, data: Dict[str, Any]) -> Outcome:
    complex_json, cochain_json, g = _cochain_document(data)
    cls = circle_class_task.apply(args=[complex_json, cochain_json, _tol(config)]).get()
    return {"class": cls}, {"delta": _delta_defect(g)}, RunStatus.OK


def _trivialize(config: RunConfig, data: Dict[str, Any]) -> Outcome:
    complex_json, cochain_json, g = _cochain_document(data)
    result = trivialize_task.apply(args=[complex_json, cochain_json, _tol(config)]).get()
    defects = {"delta": _delta_defect(g)}
    if result["trivial"]:
        h = Cochain.from_json(g.complex, result["primitive"])
        defects["primitive"] = angles.max_dist(delta(h).values - g.values)
    return result, defects, RunStatus.OK


def _report_defects(report: Dict[str, Any], suffix: str = "") -> Dict[str, float]:
    return {f"{name}{suffix}": value for name, value in CheckReport.model_validate(report).defects().items()}


def _glue(config: RunConfig, data: Dict[str, Any]) -> Outcome:
    result = glue_task.apply(args=[data, _tol(config)]).get()
    defects = _report_defects(result["report"])
    if result["passed"]:
        defects["xi"] = result["xi_defect"]
        return result, defects, RunStatus.OK
    return result, defects, RunStatus.VALIDATION_FAILURE


def _coherence_check(config: RunConfig, data: Dict[str, Any]) -> Outcome:
    result = coherence_task.apply(args=[data, _tol(config)]).get()
    defects = _report_defects(result["report"])
    for point, report in result.get("points", {}).items():
        defects.update(_report_defects(report, f"@{point}"))
    return result, defects, RunStatus.OK if result["passed"] else RunStatus.VALIDATION_FAILURE


def _pi2_demo(config: RunConfig, data: Optional[Dict[str, Any]]) -> Outcome:
    result = pi2_demo_task.apply(args=[config.grid, config.seed, config.chains, config.tol]).get()
    return result, result["defects"], RunStatus.OK if result["passed"] else RunStatus.NUMERIC_DEFECT


def _pontryagin(config: RunConfig, data: Optional[Dict[str, Any]]) -> Outcome:
    result = compute_p1_task.apply(args=[config.k, config.grid, config.arc_steps, config.tol]).get()
    return result, result["defects"], RunStatus.OK


HANDLERS: Dict[Command, Handler] = {
    Command.COHOMOLOGY: _cohomology,
    Command.GERBE_CLASS: _gerbe_class,
    Command.TRIVIALIZE: _trivialize,
    Command.GLUE: _glue,
    Command.COHERENCE_CHECK: _coherence_check,
    Command.PI2_DEMO: _pi2_demo,
    Command.PONTRYAGIN: _pontryagin,
}


def _numeric_witness(witness: Dict[str, Any]) -> Dict[str, float]:
    return {
        key: float(value)
        for key, value in witness.items()
        if isinstance(value, (int, float)) and not isinstance(value, bool)
    }


def run(config: RunConfig, data: Optional[Dict[str, Any]] = None) -> Tuple[int, Report]:
    """Dispatch ``config.command``; ``data`` overrides reading ``config.input``."""
    started = time.perf_counter()
    result: Dict[str, Any] = {}
    defects: Dict[str, float] = {}
    error: Optional[Dict[str, Any]] = None
    try:
        if data is None:
            data = load_input(config)
        if data is None and config.command in NEEDS_INPUT:
            raise SchemaError(f"{config.command.value} needs an input document", {"field": "input"})
        result, defects, status = HANDLERS[config.command](config, data)
    except GerbeLabError as exc:
        logger.warning("%s: %s", config.command.value, exc)
        status = RunStatus.NUMERIC_DEFECT if isinstance(exc, NumericDefectExceeded) else RunStatus.VALIDATION_FAILURE
        defects = _numeric_witness(exc.witness)
        error = exc.to_dict()
    except (KeyError, ValueError) as exc:
        # pydantic's ValidationError is a ValueError
        logger.warning("%s: malformed input: %s", config.command.value, exc)
        status = RunStatus.VALIDATION_FAILURE
        kind = "SchemaError" if isinstance(exc, (KeyError, ValidationError)) else type(exc).__name__
        error = {"error": kind, "message": str(exc), "witness": {}}

    report = Report(
        command=config.command,
        status=status,
        version=__version__,
        seed=config.seed,
        result=result,
        defects=defects,
        timings={"total": time.perf_counter() - started, **result.pop("timings", {})},
        error=error,
    )
    return EXIT_CODES[status], report


def dump_report(report: Report) -> str:
    """Canonical JSON: sorted keys, so equal runs print equal bytes apart from timings."""
    return json.dumps(report.model_dump(mode="json"), indent=2, sort_keys=True, ensure_ascii=False)
