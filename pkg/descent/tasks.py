"""Celery tasks for 2-descent validation and gluing."""

from typing import Any, Dict

from celery.utils.log import get_task_logger

from common.celery_app import celery_app
from descent.gluing import TwoDescentData, glue_2descent, validate_2descent

logger = get_task_logger(__name__)


@celery_app.task(name="descent.validate")
def validate_task(datum_json: Dict[str, Any], tol: float) -> Dict[str, Any]:
    try:
        report = validate_2descent(TwoDescentData.from_json(datum_json), tol)
        return report.model_dump()
    except Exception as exc:  # noqa: B902
        logger.exception("2-descent validation failed: %s", exc)
        raise


@celery_app.task(name="descent.glue")
def glue_task(datum_json: Dict[str, Any], tol: float) -> Dict[str, Any]:
    """Validate then glue; the result holds the report and, when it passes, the glued data."""
    try:
        datum = TwoDescentData.from_json(datum_json)
        report = validate_2descent(datum, tol)
        out: Dict[str, Any] = {"report": report.model_dump(), "passed": report.passed}
        if report.passed:
            glued = glue_2descent(datum, tol)
            out["glued"] = glued.to_json()
            out["xi_defect"] = glued.xi_defect
            logger.info("Glued gerbe over %d points, xi defect %.3e", len(glued.gerbe.surj.base), glued.xi_defect)
        return out
    except Exception as exc:  # noqa: B902
        logger.exception("2-descent gluing failed: %s", exc)
        raise
