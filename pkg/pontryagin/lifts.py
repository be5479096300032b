"""Path and homotopy lifts γ_ij, γ_ijk of the clutched cocycle.

``path_gamma`` is the one-parameter subgroup t ↦ exp(t·log g_ij(m)) on the
principal branch. It jumps wherever g_ij crosses −1, which every nonzero
clutching does inside the stars of mixed edges, so the class is computed from
``transported_gamma``: the one-parameter subgroup of g_ij at the edge
barycentre b, corrected pointwise by the drift g_ij(ℓ(t))·g_ij(b)⁻¹ along the
segment ℓ from b to m. It equals ``path_gamma`` at b and depends smoothly on
m throughout the star of the edge.

γ_ijk(m) is a fixed filler at the triangle barycentre, carried to m by
sliding both of its boundary paths along the segment from the barycentre.
Squares take ``rows`` intervals in s and ``n`` in t.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from pathsu2.compose import whisker_left
from pathsu2.fill import fill_square, sample_step, unhit_point
from pathsu2.grids import Path, Square, check_axis, stack_squares
from pathsu2.quat import ONE, one_parameter, qconj, qexp, qlog, qmul
from pontryagin.clutch import Clutch
from pontryagin.cover import segment

# boundary resolution used to place the pole of each anchor filler
ANCHOR_SAMPLES = 64


def path_gamma(c: Clutch, i: int, j: int, m: np.ndarray, n: int) -> Path:
    """t ↦ exp(t·log g_ij(m)), principal branch; endpoints exact."""
    g = c.transition(i, j, m)
    grid = one_parameter(qlog(g), check_axis(n))
    grid[0], grid[-1] = ONE, g
    return Path(grid)


def gamma_at(c: Clutch, i: int, j: int, m: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Transported γ_ij(m, t) for weights m (..., 6) and parameters t (...)."""
    t = np.asarray(t, dtype=float)
    if c.exponent(i, j) == 0:
        return np.broadcast_to(ONE, t.shape + (4,)).copy()
    b = c.cover.barycenter((i, j))
    g_b = c.transition(i, j, b)
    drift = qmul(c.transition(i, j, segment(b, m, t)), qconj(g_b))
    return qmul(drift, qexp(t[..., None] * qlog(g_b)))


def transported_gamma(c: Clutch, i: int, j: int, m: np.ndarray, n: int) -> Path:
    t = np.linspace(0.0, 1.0, check_axis(n) + 1)
    grid = gamma_at(c, i, j, np.broadcast_to(m, t.shape + (6,)), t)
    grid[0] = ONE
    grid[-1] = c.transition(i, j, m)
    return Path(grid)


def composite_at(c: Clutch, i: int, j: int, k: int, m: np.ndarray, t: np.ndarray) -> np.ndarray:
    """(γ_ij ∘ g_ij·γ_jk)(m, t)."""
    t = np.asarray(t, dtype=float)
    first = gamma_at(c, i, j, m, np.clip(2.0 * t, 0.0, 1.0))
    second = qmul(c.transition(i, j, m), gamma_at(c, j, k, m, np.clip(2.0 * t - 1.0, 0.0, 1.0)))
    return np.where((t <= 0.5)[..., None], first, second)


def _slide(c: Clutch, triple: Tuple[int, int, int], m: np.ndarray, rows: int, n: int, along) -> Square:
    """Homotopy from along(m) to [g_ik over the segment] ∘ along(b), b the triangle barycentre."""
    i, _, k = triple
    b = c.cover.barycenter(triple)
    s = np.linspace(0.0, 1.0, rows + 1)[:, None]
    t = np.linspace(0.0, 1.0, n + 1)[None, :]
    s, t = np.broadcast_arrays(s, t)
    tau = 1.0 - s
    split = (1.0 + tau) / 2.0
    head_t = np.clip(t / split, 0.0, 1.0)
    tail_t = np.clip((t - split) / np.where(split < 1.0, 1.0 - split, 1.0), 0.0, 1.0)
    here = segment(b, m, tau)
    head = along(here, head_t)
    tail = c.transition(i, k, segment(b, m, tau + tail_t * (1.0 - tau)))
    grid = np.where((t <= split)[..., None], head, tail)
    grid[0] = along(np.broadcast_to(m, (n + 1, 6)), t[0])
    return Square(grid)


def _composite_path(c: Clutch, i: int, j: int, k: int, m: np.ndarray, n: int) -> Path:
    t = np.linspace(0.0, 1.0, n + 1)
    return Path(composite_at(c, i, j, k, np.broadcast_to(m, t.shape + (6,)), t))


def _anchor_boundary(c: Clutch, triple: Tuple[int, int, int], n: int) -> Tuple[Path, Path]:
    b = c.cover.barycenter(triple)
    first, middle, last = triple
    return transported_gamma(c, first, last, b, n), _composite_path(c, first, middle, last, b, n)


@lru_cache(maxsize=64)
def _anchor_pole(k: int, sigma: Tuple[int, ...], triple: Tuple[int, int, int]) -> np.ndarray:
    """One chart per anchor, whatever resolution the filler is sampled at."""
    p0, p1 = _anchor_boundary(Clutch(k, sigma), triple, ANCHOR_SAMPLES)
    step = max(sample_step(p0.grid), sample_step(p1.grid))
    pole, _ = unhit_point(np.concatenate([p0.grid, p1.grid]), step=step)
    return pole


@lru_cache(maxsize=256)
def _anchor_square(k: int, sigma: Tuple[int, ...], triple: Tuple[int, int, int], rows: int, n: int) -> Square:
    p0, p1 = _anchor_boundary(Clutch(k, sigma), triple, n)
    return fill_square(p0, p1, rows, pole=_anchor_pole(k, sigma, triple))


def square_gamma(
    c: Clutch, i: int, j: int, k: int, m: np.ndarray, n: int, rows: Optional[int] = None
) -> Square:
    """A homotopy rel endpoints from γ_ik(m) to (γ_ij ∘ g_ij·γ_jk)(m), transported lifts."""
    n = check_axis(n)
    rows = n if rows is None else check_axis(rows, "s")
    triple = (i, j, k)
    m = np.asarray(m, dtype=float)
    if c.exponent(i, j) == 0 and c.exponent(j, k) == 0:
        return Square(np.broadcast_to(ONE, (rows + 1, n + 1, 4)).copy())

    def along_ik(w, t):
        return gamma_at(c, i, k, w, t)

    def along_composite(w, t):
        return composite_at(c, i, j, k, w, t)

    b = c.cover.barycenter(triple)
    tail = Path(c.transition(i, k, segment(b, m, np.linspace(0.0, 1.0, n + 1))))
    anchor = _anchor_square(c.k, tuple(c.sigma), triple, rows, n)
    square = stack_squares(
        [
            _slide(c, triple, m, rows, n, along_ik),
            whisker_left(tail, anchor),
            _slide(c, triple, m, rows, n, along_composite).reverse(),
        ]
    )
    grid = square.grid
    grid[:, 0] = ONE
    grid[:, -1] = c.transition(i, k, m)
    return Square(grid)
