"""Celery tasks for the Pontryagin class pipeline."""

from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from celery.utils.log import get_task_logger

from common.celery_app import celery_app
from common.dispatch import map_tasks
from pontryagin.clutch import DEFAULT_SIGMA, Clutch
from pontryagin.oracle import degree_oracle
from pontryagin.pipeline import DEFAULT_ARC_STEPS, compute_p1, cocycle_value

logger = get_task_logger(__name__)

ORACLE_GRID = 48


@celery_app.task(name="pontryagin.cocycle_value")
def cocycle_value_task(
    k: int, n: int, quad: List[int], weights: List[float], sigma: Optional[List[int]] = None
) -> float:
    """g_ijkl at one point given by barycentric weights."""
    try:
        c = Clutch(int(k), tuple(sigma) if sigma else DEFAULT_SIGMA)
        return cocycle_value(c, *quad, np.asarray(weights, dtype=float), n)
    except Exception as exc:  # noqa: B902
        logger.exception("Cocycle value at %s failed: %s", quad, exc)
        raise


def fan_out(arg_lists: Sequence[Sequence[Any]]) -> List[float]:
    return map_tasks(cocycle_value_task, arg_lists)


def orientation_sign(pairing: int, degree: float) -> Optional[int]:
    """Sign relating the extracted pairing to the winding degree, when both are nonzero."""
    winding = int(np.rint(degree))
    if pairing == 0 or winding == 0:
        return None
    return int(np.sign(pairing) * np.sign(winding))


@celery_app.task(name="pontryagin.compute_p1")
def compute_p1_task(
    k: int,
    n: int,
    arc_steps: int = DEFAULT_ARC_STEPS,
    delta_tol: Optional[float] = None,
    integrality_tol: Optional[float] = None,
) -> Dict[str, Any]:
    """Pontryagin report: class, pairing, degree oracle and global sign."""
    try:
        report = compute_p1(
            k, n, arc_steps=arc_steps, delta_tol=delta_tol, integrality_tol=integrality_tol, evaluate=fan_out
        )
        degree = degree_oracle(k, max(n, ORACLE_GRID))
        report["degree_oracle"] = degree
        report["sign"] = orientation_sign(report["pairing"], degree)
        logger.info("Instanton number %d: pairing=%d degree=%.4f sign=%s", k, report["pairing"], degree, report["sign"])
        return report
    except Exception as exc:  # noqa: B902
        logger.exception("Pontryagin class at k=%s failed: %s", k, exc)
        raise
