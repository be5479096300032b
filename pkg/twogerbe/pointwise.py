"""The bigroupoid of a finite 2-gerbe over one point of M."""

from __future__ import annotations

from celery.utils.log import get_logger

from gerbes.finite import Point
from twogerbe.bicat import Bicat, canonical_unitors
from twogerbe.model import Fin2Gerbe

logger = get_logger(__name__)


def restrict_to_point(g: Fin2Gerbe, m: Point) -> Bicat:
    """Objects X_m, 1-cells the points of Y over X_m × X_m, 2-cells from Q.

    Identity 1-cells are the minimal points over the diagonal pairs and the
    unitors are the canonical ones they determine.
    """
    xs = g.surj.fiber(m)
    cells = {y: g.y[y] for x1 in xs for x2 in xs for y in g.fiber(x1, x2)}
    keep = set(cells)
    compose = {k: v for k, v in g.m.items() if k[0] in keep}
    vc = {k: v for k, v in g.c.items() if k[0] in keep}
    hc = {k: v for k, v in g.m_hat.items() if k[0] in keep}
    assoc = {k: v for k, v in g.a_hat.items() if k[0] in keep}
    identities = {x: g.fiber(x, x)[0] for x in xs}
    logger.debug("Point %s: %d objects, %d 1-cells", m, len(xs), len(cells))
    return canonical_unitors(Bicat(tuple(xs), cells, compose, vc, hc, assoc, identities))
