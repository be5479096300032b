"""The star cover of S⁴ realized by the boundary of the 5-simplex.

Points are handled as boundary barycentric weights: six non-negative numbers
summing to one with at least one zero, i.e. a point of |∂Δ⁵|. Radial
projection to the unit sphere of R⁵ goes through the vertices of a regular
simplex centred at the origin. The open star of a face is where all of its
vertices carry positive weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Sequence

import numpy as np
from celery.utils.log import get_logger

from cech.classes import fundamental_cycle
from cech.complex import Complex, make_boundary_simplex
from common.errors import ValidationFailure
from common.models import join_key

logger = get_logger(__name__)

VERTEX_COUNT = 6
# two opposite triangles; their barycenters are the clutching poles
NORTH = (0, 1, 2)
SOUTH = (3, 4, 5)


def helmert_basis(n: int) -> np.ndarray:
    """Orthonormal basis (rows) of the sum-zero hyperplane of Rⁿ."""
    rows = []
    for k in range(1, n):
        row = np.zeros(n)
        row[:k] = 1.0
        row[k] = -float(k)
        rows.append(row / np.sqrt(k * (k + 1)))
    return np.array(rows)


def pole_frame(pole: np.ndarray) -> np.ndarray:
    """Orthonormal frame of R⁵ as rows: four quaternion axes, then the pole axis."""
    dim = pole.shape[0]
    q, _ = np.linalg.qr(np.column_stack([pole, np.eye(dim)[:, : dim - 1]]))
    if np.dot(q[:, 0], pole) < 0:
        q = -q
    return np.vstack([q[:, 1:].T, q[:, 0]])


@dataclass(frozen=True, eq=False)
class SphereCover:
    vertices: np.ndarray
    nerve: Complex
    frame: np.ndarray
    orientation: np.ndarray

    def point(self, weights: np.ndarray) -> np.ndarray:
        """Unit vector of R⁵ for barycentric weights (vectorized)."""
        y = np.asarray(weights, dtype=float) @ self.vertices
        return y / np.linalg.norm(y, axis=-1, keepdims=True)

    def weights(self, x: np.ndarray) -> np.ndarray:
        """Boundary barycentric weights of a unit vector (vectorized)."""
        d = np.asarray(x, dtype=float) @ self.vertices.T
        scale = -1.0 / (5.0 * np.min(d, axis=-1, keepdims=True))
        return (1.0 + 5.0 * scale * d) / 6.0

    def barycenter(self, face: Sequence[int]) -> np.ndarray:
        w = np.zeros(VERTEX_COUNT)
        w[list(face)] = 1.0 / len(face)
        return w

    def in_star(self, face: Sequence[int], weights: np.ndarray, eps: float = 1e-12) -> bool:
        return bool(np.all(np.asarray(weights)[list(face)] > eps))

    def quaternion_coordinate(self, x: np.ndarray) -> np.ndarray:
        """Components of x along the four axes orthogonal to the poles."""
        return np.asarray(x, dtype=float) @ self.frame[:4].T

    @property
    def poles(self) -> Dict[str, np.ndarray]:
        return {"north": self.frame[4], "south": -self.frame[4]}

    def samples(self, k: int) -> Dict[str, np.ndarray]:
        """Barycentre points of the k-faces, keyed by face."""
        return {join_key(face): self.point(self.barycenter(face)) for face in self.nerve.faces_of(k)}


def segment(a: np.ndarray, b: np.ndarray, tau) -> np.ndarray:
    """Weights along the straight segment from a to b, broadcast over tau."""
    tau = np.asarray(tau, dtype=float)[..., None]
    return (1.0 - tau) * np.asarray(a, dtype=float) + tau * np.asarray(b, dtype=float)


@lru_cache(maxsize=1)
def make_cover() -> SphereCover:
    raw = helmert_basis(VERTEX_COUNT) @ (np.eye(VERTEX_COUNT) - 1.0 / VERTEX_COUNT)
    vertices = (raw / np.linalg.norm(raw, axis=0)).T
    nerve = make_boundary_simplex(4)
    pole = vertices[list(NORTH)].sum(axis=0)
    cover = SphereCover(vertices, nerve, pole_frame(pole / np.linalg.norm(pole)), fundamental_cycle(nerve))

    seen = []
    for k in range(nerve.dim + 1):
        for face in nerve.faces_of(k):
            w = cover.barycenter(face)
            back = cover.weights(cover.point(w))
            if not np.allclose(back, w, atol=1e-12) or not cover.in_star(face, w):
                raise ValidationFailure("barycentre leaves the star of its face", {"face": join_key(face)})
            seen.append(cover.point(w))
    pts = np.array(seen)
    gaps = np.linalg.norm(pts[:, None] - pts[None], axis=-1) + np.eye(len(pts))
    if np.min(gaps) < 1e-6:
        raise ValidationFailure("face barycentres are not distinct", {"gap": float(np.min(gaps))})
    logger.debug("Built the ∂Δ⁵ star cover with %d sample points", len(pts))
    return cover
