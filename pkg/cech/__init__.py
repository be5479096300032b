"""Complexes, cochains, the coboundary δ and integer cohomology classes."""

from cech.classes import (  # noqa: F401
    CohomologyClass,
    circle_class,
    class_of,
    cohomology,
    fundamental_cycle,
    generators,
    local_circle_class,
    pair,
    torsion_circle_cocycle,
    trivialize_circle,
)
from cech.cochain import (  # noqa: F401
    Cochain,
    coboundary_matrix,
    delta,
    dual_cocycle,
    product_cocycle,
    pullback_cocycle,
    random_cochain,
)
from cech.complex import Complex, cover_nerve, make_boundary_simplex, make_rp2, pointwise_nerve  # noqa: F401
