"""Clutched SU(2) transition functions of instanton number k."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from common.errors import PoleTooClose, ValidationFailure
from pathsu2.quat import qnormalize, qpow
from pontryagin.cover import NORTH, SphereCover, make_cover

MIN_CHART_DISTANCE = 0.1

DEFAULT_SIGMA = tuple(0 if v in NORTH else 1 for v in range(6))


@dataclass(frozen=True, eq=False)
class Clutch:
    """g_ij(m) = u(m)^(k·(σ(j) − σ(i))) with u the normalized quaternionic coordinate."""

    k: int
    sigma: Tuple[int, ...] = DEFAULT_SIGMA
    cover: SphereCover = field(default_factory=make_cover)

    def __post_init__(self) -> None:
        if len(set(self.sigma)) != 2 or len(self.sigma) != len(self.cover.vertices):
            raise ValidationFailure("chart assignment must use both charts", {"sigma": list(self.sigma)})

    def exponent(self, i: int, j: int) -> int:
        return self.k * (self.sigma[j] - self.sigma[i])

    def u(self, x: np.ndarray) -> np.ndarray:
        """Normalized affine quaternionic coordinate of unit vectors x ∈ S⁴."""
        q = self.cover.quaternion_coordinate(x)
        radius = np.linalg.norm(q, axis=-1)
        if np.any(radius < MIN_CHART_DISTANCE):
            raise PoleTooClose("point too close to a clutching pole", {"chart_distance": float(np.min(radius))})
        return qnormalize(q)

    def transition(self, i: int, j: int, weights: np.ndarray) -> np.ndarray:
        """g_ij at points given by barycentric weights (vectorized)."""
        weights = np.asarray(weights, dtype=float)
        e = self.exponent(i, j)
        if e == 0:
            return np.broadcast_to(np.array([1.0, 0.0, 0.0, 0.0]), weights.shape[:-1] + (4,)).copy()
        return qpow(self.u(self.cover.point(weights)), e)
