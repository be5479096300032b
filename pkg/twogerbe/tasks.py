"""Celery tasks for finite 2-gerbes and bicategories."""

from typing import Any, Dict, List, Mapping, Optional

from celery.utils.log import get_task_logger

from common.celery_app import celery_app
from common.dispatch import map_tasks
from twogerbe.bicat import Bicat, check_bicat
from twogerbe.cocycle import cocycle_defect, default_choices, extract_3cocycle
from twogerbe.model import Fin2Gerbe, validate_2gerbe
from twogerbe.pointwise import restrict_to_point

logger = get_task_logger(__name__)


def is_bicat_json(data: Mapping[str, Any]) -> bool:
    return "objects" in data and "cells" in data


@celery_app.task(name="twogerbe.check_point")
def check_point_task(gerbe_json: Dict[str, Any], point: str, tol: float) -> Dict[str, Any]:
    """Bicategory checks of the bigroupoid over one base point."""
    try:
        report = check_bicat(restrict_to_point(Fin2Gerbe.from_json(gerbe_json), point), tol)
        return {"point": point, "passed": report.passed, "report": report.model_dump()}
    except Exception as exc:  # noqa: B902
        logger.exception("Point check at %s failed: %s", point, exc)
        raise


@celery_app.task(name="twogerbe.validate")
def validate_task(data: Dict[str, Any], tol: float) -> Dict[str, Any]:
    """Coherence-check either a Fin2Gerbe or a Bicat document."""
    try:
        if is_bicat_json(data):
            report = check_bicat(Bicat.from_json(data), tol)
            return {"kind": "bicat", "passed": report.passed, "report": report.model_dump()}
        g = Fin2Gerbe.from_json(data)
        report = validate_2gerbe(g, tol)
        out: Dict[str, Any] = {"kind": "2gerbe", "passed": report.passed, "report": report.model_dump()}
        if report.passed:
            points = map_tasks(check_point_task, [(data, str(m), tol) for m in g.surj.base])
            out["points"] = {p["point"]: p["report"] for p in points}
            out["passed"] = all(p["passed"] for p in points)
        logger.info("2-gerbe over %d points: passed=%s", len(g.surj.base), out["passed"])
        return out
    except Exception as exc:  # noqa: B902
        logger.exception("2-gerbe validation failed: %s", exc)
        raise


@celery_app.task(name="twogerbe.extract")
def extract_task(gerbe_json: Dict[str, Any], cover: Optional[List[List[str]]] = None) -> Dict[str, Any]:
    try:
        g = Fin2Gerbe.from_json(gerbe_json)
        sets = [frozenset(u) for u in cover] if cover else [frozenset(g.surj.base)]
        choices = default_choices(g, sets)
        eps = extract_3cocycle(g, choices)
        labels = choices.nerve.labels or ()
        return {
            "cochain": eps.to_json(),
            "labels": [[str(m), i] for m, i in labels],
            "delta_defect": cocycle_defect(eps),
        }
    except Exception as exc:  # noqa: B902
        logger.exception("3-cocycle extraction failed: %s", exc)
        raise
