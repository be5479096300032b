"""Sampled paths, squares and cubes in SU(2).

Each axis of a grid carries ``n + 1`` uniform samples of [0, 1] with
``n ≥ 8`` and ``n`` divisible by 4, so halving and quartering
reparametrizations land on grid points. Squares are indexed ``[s, t]`` and
cubes ``[r, s, t]``; ``t`` is the path parameter, ``s`` the homotopy
parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from common.errors import BoundaryMismatch, InvalidGrid
from pathsu2.quat import check_unit, qdist, qmul, slerp

MIN_SAMPLES = 8
# endpoint and boundary agreement
MATCH_TOL = 1e-9


def check_axis(n: int, axis: str = "t") -> int:
    if n < MIN_SAMPLES or n % 4:
        raise InvalidGrid(
            f"axis {axis} needs at least {MIN_SAMPLES} intervals and a multiple of 4",
            {"axis": axis, "n": int(n)},
        )
    return int(n)


def match_defect(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return float("inf")
    return float(np.max(qdist(a, b))) if a.size else 0.0


def sample_at(grid: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Geodesic interpolation along axis 0; exact on grid points."""
    n = grid.shape[0] - 1
    u = np.clip(np.asarray(t, dtype=float), 0.0, 1.0) * n
    nearest = np.rint(u)
    u = np.where(np.abs(u - nearest) < 1e-9, nearest, u)
    i = np.clip(np.floor(u).astype(int), 0, n - 1)
    f = u - i
    # one weight per leading index, broadcast over the remaining sample axes
    f = f.reshape(f.shape + (1,) * (grid.ndim - 2))
    return slerp(grid[i], grid[i + 1], f)


@dataclass(frozen=True, eq=False)
class Path:
    grid: np.ndarray

    def __post_init__(self) -> None:
        grid = check_unit(self.grid)
        if grid.ndim != 2:
            raise InvalidGrid("a path grid is (n+1, 4)", {"shape": list(grid.shape)})
        check_axis(grid.shape[0] - 1)
        object.__setattr__(self, "grid", grid)

    @property
    def n(self) -> int:
        return self.grid.shape[0] - 1

    @property
    def start(self) -> np.ndarray:
        return self.grid[0]

    @property
    def end(self) -> np.ndarray:
        return self.grid[-1]

    def at(self, t) -> np.ndarray:
        return sample_at(self.grid, t)

    def resample(self, n: int) -> "Path":
        if n == self.n:
            return self
        return Path(self.at(np.linspace(0.0, 1.0, check_axis(n) + 1)))

    def translate(self, g: np.ndarray) -> "Path":
        return Path(qmul(g, self.grid))

    @classmethod
    def constant(cls, x: np.ndarray, n: int) -> "Path":
        return cls(np.tile(np.asarray(x, dtype=float), (check_axis(n) + 1, 1)))

    def to_json(self) -> List[List[float]]:
        return self.grid.tolist()


@dataclass(frozen=True, eq=False)
class Square:
    """A grid over [s, t]; rows are paths in t."""

    grid: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        grid = check_unit(self.grid)
        if grid.ndim != 3:
            raise InvalidGrid("a square grid is (ns+1, nt+1, 4)", {"shape": list(grid.shape)})
        check_axis(grid.shape[0] - 1, "s")
        check_axis(grid.shape[1] - 1, "t")
        object.__setattr__(self, "grid", grid)

    @property
    def rows(self) -> int:
        return self.grid.shape[0] - 1

    @property
    def n(self) -> int:
        return self.grid.shape[1] - 1

    @property
    def source(self) -> Path:
        return Path(self.grid[0])

    @property
    def target(self) -> Path:
        return Path(self.grid[-1])

    def row(self, k: int) -> Path:
        return Path(self.grid[k])

    def column(self, k: int) -> np.ndarray:
        return self.grid[:, k]

    def translate(self, g: np.ndarray) -> "Square":
        return Square(qmul(g, self.grid))

    def reverse(self) -> "Square":
        return Square(self.grid[::-1].copy())

    def resample_rows(self, rows: int) -> "Square":
        if rows == self.rows:
            return self
        s = np.linspace(0.0, 1.0, check_axis(rows, "s") + 1)
        return Square(sample_at(self.grid, s))

    def to_json(self) -> List[Any]:
        return self.grid.tolist()


@dataclass(frozen=True, eq=False)
class Cube:
    """A grid over [r, s, t]."""

    grid: np.ndarray

    def __post_init__(self) -> None:
        grid = check_unit(self.grid)
        if grid.ndim != 4:
            raise InvalidGrid("a cube grid is (nr+1, ns+1, nt+1, 4)", {"shape": list(grid.shape)})
        for axis, size in zip("rst", grid.shape[:3]):
            check_axis(size - 1, axis)
        object.__setattr__(self, "grid", grid)

    @property
    def shape(self):
        return self.grid.shape[:3]


def constant_square(path: Path, rows: Optional[int] = None) -> Square:
    """The identity homotopy of ``path``."""
    rows = path.n if rows is None else check_axis(rows, "s")
    return Square(np.broadcast_to(path.grid, (rows + 1,) + path.grid.shape).copy())


def reverse_square(m: Square) -> Square:
    """The inverse 2-cell, sampled as s ↦ 1 − s."""
    return m.reverse()


def stack_squares(squares: Sequence[Square]) -> Square:
    """Concatenate homotopies along s, each keeping its own rows.

    Consecutive squares must share their boundary row; the result is a
    reparametrized vertical composite whose rows are exactly the input rows.
    """
    if not squares:
        raise InvalidGrid("nothing to stack", {})
    n = squares[0].n
    parts = [squares[0].grid]
    for k, (lower, upper) in enumerate(zip(squares, squares[1:]), start=1):
        if upper.n != n:
            raise InvalidGrid("stacked squares need a common t grid", {"index": k, "n": [n, upper.n]})
        defect = match_defect(lower.grid[-1], upper.grid[0])
        if defect > MATCH_TOL:
            raise BoundaryMismatch("stacked squares do not share a boundary row", {"index": k, "defect": defect})
        parts.append(upper.grid[1:])
    return Square(np.concatenate(parts, axis=0))
