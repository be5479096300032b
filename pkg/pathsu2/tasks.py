"""Celery tasks for the sampled Π₂(SU(2)) calculus."""

from typing import Any, Dict, List, Optional

import numpy as np
from celery.utils.log import get_task_logger

from common.celery_app import celery_app
from common.config import get_settings
from common.dispatch import map_tasks
from pathsu2.compose import associator_square, compose_paths
from pathsu2.export import export_bicat
from pathsu2.fixtures import random_chain
from pathsu2.grids import Path, match_defect
from pathsu2.homotopy import bubble_report, pentagon_defect
from pathsu2.nu import exp_chart, integrate_nu_cube
from twogerbe.bicat import check_bicat

logger = get_task_logger(__name__)

# smallest grid for the normalization and bubble checks
NORMALIZATION_GRID = 48


def _paths(grids: List[List[List[float]]]) -> List[Path]:
    return [Path(np.asarray(g, dtype=float)) for g in grids]


@celery_app.task(name="pathsu2.pentagon_defect")
def pentagon_defect_task(grids: List[List[List[float]]]) -> float:
    """Pentagon defect of a chain given earliest first."""
    try:
        c12, c23, c34, c45 = _paths(grids)
        return pentagon_defect(c45, c34, c23, c12)
    except Exception as exc:  # noqa: B902
        logger.exception("Pentagon defect failed: %s", exc)
        raise


@celery_app.task(name="pathsu2.pi2_demo")
def pi2_demo_task(n: int, seed: int, chains: int = 5, tol: Optional[float] = None) -> Dict[str, Any]:
    """Normalization, bubble, associator boundary and pentagon checks on seeded chains."""
    try:
        tol = get_settings().pi2_tol if tol is None else tol
        rng = np.random.default_rng(seed)
        sampled = [random_chain(rng, 4, n) for _ in range(chains)]

        fine = max(n, NORMALIZATION_GRID)
        normalization = integrate_nu_cube(exp_chart(fine))
        bubble = bubble_report(fine, tol)
        pentagons = [float(d) for d in map_tasks(pentagon_defect_task, [([p.to_json() for p in chain],) for chain in sampled])]

        rows = 0.0
        for c12, c23, c34, _ in sampled:
            square = associator_square(c34, c23, c12)
            rows = max(
                rows,
                match_defect(square.grid[0], compose_paths(compose_paths(c34, c23), c12).grid),
                match_defect(square.grid[-1], compose_paths(c34, compose_paths(c23, c12)).grid),
            )

        defects = {
            "normalization": abs(normalization - 1.0),
            "bubble": bubble["defect"],
            "pentagon": max(pentagons, default=0.0),
            "associator_rows": rows,
        }
        passed = all(v <= tol for v in defects.values())
        logger.info("Π₂ demo at N=%d: %s passed=%s", n, defects, passed)
        return {
            "grid": n,
            "normalization": normalization,
            "bubble": bubble,
            "pentagon_defects": pentagons,
            "defects": defects,
            "passed": passed,
        }
    except Exception as exc:  # noqa: B902
        logger.exception("Π₂ demo failed: %s", exc)
        raise


@celery_app.task(name="pathsu2.export")
def export_task(grids: List[List[List[float]]], n: Optional[int] = None, tol: Optional[float] = None) -> Dict[str, Any]:
    """Sample a bicategory from a chain and run the coherence checks on it."""
    try:
        tol = get_settings().pi2_tol if tol is None else tol
        b = export_bicat(_paths(grids), n)
        report = check_bicat(b, tol, invertible_cells=False)
        return {"bicat": b.to_json(), "passed": report.passed, "report": report.model_dump()}
    except Exception as exc:  # noqa: B902
        logger.exception("Bicategory export failed: %s", exc)
        raise
