"""Celery tasks for finite gerbes and their 2-category laws."""

from typing import Any, Dict

import numpy as np
from celery.utils.log import get_task_logger

from common import angles
from common.celery_app import celery_app
from gerbes.finite import FinGerbe, groupoid_at
from gerbes.fixtures import gerbe_family, random_morphism, random_transformation
from gerbes.twocat import (
    hcompose,
    identity_transformation,
    interchange_defect,
    phi_fg,
    transport_cocycle_defect,
    vcompose,
)

logger = get_task_logger(__name__)


@celery_app.task(name="gerbes.validate")
def validate_gerbe_task(gerbe_json: Dict[str, Any]) -> Dict[str, Any]:
    """Validate a gerbe and check the groupoid axioms at every base point."""
    try:
        P = FinGerbe.from_json(gerbe_json)
        defects = {str(m): groupoid_at(P, m).check() for m in P.surj.base}
        return {
            "base": [str(m) for m in P.surj.base],
            "fiber_sizes": {str(m): len(P.surj.fiber(m)) for m in P.surj.base},
            "groupoid_defect": max(defects.values()),
        }
    except Exception as exc:  # noqa: B902
        logger.exception("Gerbe validation failed: %s", exc)
        raise


@celery_app.task(name="gerbes.check_laws")
def check_laws_task(seed: int, trials: int = 10) -> Dict[str, float]:
    """Randomized sweep of the 2-category laws; returns the worst defect per law."""
    rng = np.random.default_rng(seed)
    worst = {"transport_cocycle": 0.0, "transport_u_independence": 0.0, "vertical_associativity": 0.0,
             "vertical_units": 0.0, "interchange": 0.0, "horizontal_units": 0.0}
    for _ in range(trials):
        P, Q, R = gerbe_family(rng, n_base=int(rng.integers(1, 5)))
        f1, f2, f3 = (random_morphism(P, Q, rng) for _ in range(3))
        g1, g2, g3 = (random_morphism(Q, R, rng) for _ in range(3))
        t12, t23 = random_transformation(f1, f2, rng), random_transformation(f2, f3, rng)
        l12, l23 = random_transformation(g1, g2, rng), random_transformation(g2, g3, rng)
        t33 = random_transformation(f3, f3, rng)

        worst["transport_cocycle"] = max(worst["transport_cocycle"], transport_cocycle_defect(f1, f2))
        for x1, x2 in P.surj.tuples(2):
            d = angles.dist(phi_fg(f1, f2, x1, x2, 0.4, u=0.0) - phi_fg(f1, f2, x1, x2, 0.4, u=0.37))
            worst["transport_u_independence"] = max(worst["transport_u_independence"], d)
        left = vcompose(vcompose(t12, t23), t33)
        right = vcompose(t12, vcompose(t23, t33))
        worst["vertical_associativity"] = max(worst["vertical_associativity"], left.distance(right))
        unit = max(
            vcompose(identity_transformation(f1), t12).distance(t12),
            vcompose(t12, identity_transformation(f2)).distance(t12),
        )
        worst["vertical_units"] = max(worst["vertical_units"], unit)
        worst["interchange"] = max(worst["interchange"], interchange_defect(t12, t23, l12, l23))
        ident = hcompose(identity_transformation(f1), identity_transformation(g1))
        worst["horizontal_units"] = max(worst["horizontal_units"], max(angles.dist(v) for v in ident.theta.values()))
    logger.info("2-category law sweep (seed %d): %s", seed, worst)
    return worst
