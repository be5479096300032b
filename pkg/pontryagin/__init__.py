"""The first Pontryagin class of clutched SU(2) bundles over S⁴."""

from pontryagin.clutch import Clutch  # noqa: F401
from pontryagin.cover import SphereCover, make_cover  # noqa: F401
from pontryagin.oracle import degree_oracle  # noqa: F401
from pontryagin.pipeline import cocycle_value, compute_p1  # noqa: F401
