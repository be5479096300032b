"""Winding of the clutching map over the equatorial 3-sphere."""

from __future__ import annotations

import numpy as np

from pathsu2.nu import degree_s3
from pathsu2.quat import qpow
from pontryagin.clutch import Clutch
from pontryagin.cover import SphereCover, make_cover


def equator(cover: SphereCover, q: np.ndarray) -> np.ndarray:
    """Unit quaternions as points of S⁴ orthogonal to the pole axis."""
    return np.asarray(q, dtype=float) @ cover.frame[:4]


def degree_oracle(k: int, n: int) -> float:
    """∫ν of q ↦ u(q)^k over the equator; approximately k."""
    c = Clutch(int(k), cover=make_cover())

    def clutching(q: np.ndarray) -> np.ndarray:
        return qpow(c.u(equator(c.cover, q)), c.k)

    return degree_s3(clutching, n)
