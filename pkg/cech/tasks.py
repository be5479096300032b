"""Celery tasks for Čech cohomology computations.

Tasks take and return plain JSON values (complexes and cochains in the
``to_json`` layout) so they can run on a worker as well as in-process.
"""

from typing import Any, Dict

from celery.utils.log import get_task_logger

from cech.classes import circle_class, class_of, cohomology, trivialize_circle
from cech.cochain import Cochain
from cech.complex import Complex
from common.celery_app import celery_app
from common.errors import NotTrivial

logger = get_task_logger(__name__)


@celery_app.task(name="cech.cohomology")
def cohomology_task(complex_json: Dict[str, Any], k: int) -> Dict[str, Any]:
    """Betti number and torsion orders of H^k of a complex."""
    try:
        K = Complex.from_json(complex_json)
        betti, torsion = cohomology(K, k)
        logger.info("H^%d: betti=%d torsion=%s", k, betti, torsion)
        return {"degree": k, "betti": betti, "torsion": torsion}
    except Exception as exc:  # noqa: B902
        logger.exception("Cohomology failed: %s", exc)
        raise


@celery_app.task(name="cech.class_of")
def class_of_task(complex_json: Dict[str, Any], cochain_json: Dict[str, Any]) -> Dict[str, Any]:
    try:
        K = Complex.from_json(complex_json)
        return class_of(Cochain.from_json(K, cochain_json)).to_json()
    except Exception as exc:  # noqa: B902
        logger.exception("Class extraction failed: %s", exc)
        raise


@celery_app.task(name="cech.circle_class")
def circle_class_task(complex_json: Dict[str, Any], cochain_json: Dict[str, Any], tol: float) -> Dict[str, Any]:
    """Integer class of a circle-valued cocycle."""
    try:
        K = Complex.from_json(complex_json)
        cls = circle_class(Cochain.from_json(K, cochain_json), tol)
        logger.info("Circle class in degree %d: free=%s torsion=%s", cls.degree, cls.free, cls.torsion)
        return cls.to_json()
    except Exception as exc:  # noqa: B902
        logger.exception("Circle class failed: %s", exc)
        raise


@celery_app.task(name="cech.trivialize")
def trivialize_task(complex_json: Dict[str, Any], cochain_json: Dict[str, Any], tol: float) -> Dict[str, Any]:
    """Primitive of a circle cocycle; ``trivial`` is false when the class is nonzero."""
    K = Complex.from_json(complex_json)
    g = Cochain.from_json(K, cochain_json)
    try:
        h = trivialize_circle(g, tol)
    except NotTrivial as exc:
        logger.info("Cocycle is not trivial: %s", exc)
        return {"trivial": False, "witness": exc.witness}
    except Exception as exc:  # noqa: B902
        logger.exception("Trivialization failed: %s", exc)
        raise
    return {"trivial": True, "primitive": h.to_json()}
