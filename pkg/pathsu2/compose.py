"""Composition of sampled paths and homotopies.

Arguments follow composition order: ``compose_paths(a, b)`` runs ``b`` first,
``compose_squares(m2, m1, ...)`` puts ``m1`` first along the composed axis.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from common.errors import BoundaryMismatch, EndpointMismatch, ValidationFailure
from pathsu2.grids import MATCH_TOL, Path, Square, check_axis, constant_square, match_defect, stack_squares


def _common_n(*paths: Path) -> int:
    return max(p.n for p in paths)


def _check_meet(first: Path, then: Path, where: str) -> None:
    defect = match_defect(first.end, then.start)
    if defect > MATCH_TOL:
        raise EndpointMismatch("paths are not composable", {"at": where, "defect": defect})


def compose_paths(a: Path, b: Path) -> Path:
    """``b`` on [0, ½] then ``a`` on [½, 1], sampled on the common grid."""
    _check_meet(b, a, "b.end/a.start")
    n = _common_n(a, b)
    a, b = a.resample(n), b.resample(n)
    grid = np.concatenate([b.grid[0 : n + 1 : 2], a.grid[2 : n + 1 : 2]], axis=0)
    return Path(grid)


def compose_squares(m2: Square, m1: Square, mode: str) -> Square:
    """Vertical (``m1`` then ``m2`` in s) or horizontal (``m1`` then ``m2`` in t)."""
    if mode == "vertical":
        if m1.n != m2.n:
            raise BoundaryMismatch("vertical composition needs a common t grid", {"n": [m1.n, m2.n]})
        if m1.rows != m2.rows:
            m2 = m2.resample_rows(m1.rows)
        return stack_squares([m1, m2])
    if mode == "horizontal":
        if m1.rows != m2.rows:
            raise BoundaryMismatch("horizontal composition needs a common s grid", {"rows": [m1.rows, m2.rows]})
        defect = match_defect(m1.grid[:, -1], m2.grid[:, 0])
        if defect > MATCH_TOL:
            raise BoundaryMismatch("squares do not share their vertical edge", {"defect": defect})
        n = max(m1.n, m2.n)
        first = _resample_t(m1, n)
        second = _resample_t(m2, n)
        grid = np.concatenate([first[:, 0 : n + 1 : 2], second[:, 2 : n + 1 : 2]], axis=1)
        return Square(grid)
    raise ValidationFailure("unknown composition mode", {"mode": mode})


def _resample_t(m: Square, n: int) -> np.ndarray:
    if m.n == n:
        return m.grid
    t = np.linspace(0.0, 1.0, check_axis(n) + 1)
    return np.stack([row.at(t) for row in (m.row(k) for k in range(m.rows + 1))], axis=0)


def whisker_left(g: Path, m: Square) -> Square:
    """Post-compose a homotopy with a fixed path: g ∘ m."""
    return compose_squares(constant_square(g.resample(m.n), m.rows), m, "horizontal")


def whisker_right(m: Square, f: Path) -> Square:
    """Pre-compose a homotopy with a fixed path: m ∘ f."""
    return compose_squares(m, constant_square(f.resample(m.n), m.rows), "horizontal")


def _grid(n: int, rows: int):
    s = np.linspace(0.0, 1.0, rows + 1)[:, None]
    t = np.linspace(0.0, 1.0, n + 1)[None, :]
    return np.broadcast_arrays(s, t)


def _piecewise(pieces, n: int, rows: int) -> Square:
    out = np.empty((rows + 1, n + 1, 4))
    for mask, path, local in pieces:
        if np.any(mask):
            out[mask] = path.at(np.clip(local[mask], 0.0, 1.0))
    return Square(out)


def associator_square(c34: Path, c23: Path, c12: Path, rows: Optional[int] = None) -> Square:
    """Reparametrization homotopy from (c34∘c23)∘c12 to c34∘(c23∘c12)."""
    _check_meet(c12, c23, "c12.end/c23.start")
    _check_meet(c23, c34, "c23.end/c34.start")
    n = _common_n(c34, c23, c12)
    rows = n if rows is None else check_axis(rows, "s")
    s, t = _grid(n, rows)
    b1 = (2.0 - s) / 4.0
    b2 = (3.0 - s) / 4.0
    first = t <= b1
    second = ~first & (t <= b2)
    third = ~first & ~second
    return _piecewise(
        [
            (first, c12, 4.0 * t / (2.0 - s)),
            (second, c23, 4.0 * t - 2.0 + s),
            (third, c34, (4.0 * t - 3.0 + s) / (s + 1.0)),
        ],
        n,
        rows,
    )


def identity_square(c: Path, side: str, rows: Optional[int] = None) -> Square:
    """Unitor homotopies: ``left`` runs c to c∘1, ``right`` runs c to 1∘c."""
    n = c.n
    rows = n if rows is None else check_axis(rows, "s")
    s, t = _grid(n, rows)
    start = Path.constant(c.start, n)
    end = Path.constant(c.end, n)
    if side == "left":
        flat = t <= s / 2.0
        return _piecewise([(flat, start, t), (~flat, c, (2.0 * t - s) / (2.0 - s))], n, rows)
    if side == "right":
        moving = t <= 1.0 / (s + 1.0)
        return _piecewise([(moving, c, (s + 1.0) * t), (~moving, end, t)], n, rows)
    raise ValidationFailure("unknown unitor side", {"side": side})
