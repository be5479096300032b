"""Integration of the normalized volume form of SU(2) over sampled cubes.

For each cell the three edge directions are averaged over the four parallel
edges, pulled back to the Lie algebra by right translation with the cell
centre, and the determinant of their imaginary parts is accumulated. The
normalization makes the volume of SU(2) one, oriented by ``exp_chart``.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from pathsu2.grids import Cube, check_axis
from pathsu2.quat import qconj, qmul

VOLUME = 2.0 * np.pi**2


def _pair_mean(x: np.ndarray, axis: int) -> np.ndarray:
    lo = [slice(None)] * x.ndim
    hi = [slice(None)] * x.ndim
    lo[axis], hi[axis] = slice(None, -1), slice(1, None)
    return (x[tuple(lo)] + x[tuple(hi)]) / 2.0


def _edge_means(g: np.ndarray, axis: int) -> np.ndarray:
    """Average of the four cell edges along ``axis``."""
    d = np.diff(g, axis=axis)
    for other in range(3):
        if other != axis:
            d = _pair_mean(d, other)
    return d


def nu_density(grid: np.ndarray) -> np.ndarray:
    """Per-cell contributions to ∫ν for a (nr+1, ns+1, nt+1, 4) grid."""
    g = np.asarray(grid, dtype=float)
    centre = _pair_mean(_pair_mean(_pair_mean(g, 0), 1), 2)
    inv = qconj(centre) / np.sum(centre * centre, axis=-1, keepdims=True)
    w = [qmul(_edge_means(g, axis), inv)[..., 1:] for axis in range(3)]
    det = np.einsum("...i,...i->...", w[0], np.cross(w[1], w[2]))
    return det / VOLUME


def integrate_nu_cube(c: Cube) -> float:
    """Real-valued ∫ν over the sampled cube."""
    return float(np.sum(nu_density(c.grid).ravel()))


def exp_chart(n: int) -> Cube:
    """A degree-one parametrization of SU(2) by the unit cube.

    g(a, b, c) = exp(π a · n(b, c)) with n the round parametrization of the
    unit 2-sphere; faces a = 0 and a = 1 collapse to ±1.
    """
    n = check_axis(n)
    a, b, c = np.meshgrid(*(np.linspace(0.0, 1.0, n + 1),) * 3, indexing="ij")
    axis = np.stack(
        [np.cos(np.pi * b), np.sin(np.pi * b) * np.cos(2 * np.pi * c), np.sin(np.pi * b) * np.sin(2 * np.pi * c)],
        axis=-1,
    )
    theta = (np.pi * a)[..., None]
    return Cube(np.concatenate([np.cos(theta), np.sin(theta) * axis], axis=-1))


def degree_s3(f: Callable[[np.ndarray], np.ndarray], n: int) -> float:
    """∫ of f*ν over SU(2) for a vectorized map f: SU(2) → SU(2)."""
    chart = exp_chart(n)
    return integrate_nu_cube(Cube(f(chart.grid)))
