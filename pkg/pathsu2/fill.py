"""Filling prescribed boundaries with squares and cubes.

The boundary is projected stereographically from a point of SU(2) it does
not hit, the interior is blended from the boundary in R³ (Coons patches,
Boolean-sum form for cubes), mapped back, and the boundary samples are then
reset to the prescribed ones exactly.
"""

from __future__ import annotations

from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from celery.utils.log import get_logger

from common.errors import BoundaryInconsistent, BoundaryMismatch, NoUnhitPoint
from pathsu2.grids import MATCH_TOL, Cube, Path, Square, check_axis, match_defect
from pathsu2.quat import qconj, qdist, qmul, qnormalize

logger = get_logger(__name__)

CANDIDATE_SEED = 1729
CANDIDATE_COUNT = 512
MIN_CLEARANCE = 1e-2

_CANDIDATES = qnormalize(np.random.default_rng(CANDIDATE_SEED).standard_normal((CANDIDATE_COUNT, 4)))

FACES = ("r0", "r1", "s0", "s1", "t0", "t1")


def unhit_point(
    samples: np.ndarray, min_clearance: float = MIN_CLEARANCE, step: float = 0.0
) -> Tuple[np.ndarray, float]:
    """The candidate farthest from every sample, with its chordal clearance.

    ``step`` is the largest angle between neighbouring samples. The clearance
    is reduced by half of it, so it holds along the geodesics joining them.
    """
    pts = np.asarray(samples, dtype=float).reshape(-1, 4)
    centre = pts.mean(axis=0)
    candidates = _CANDIDATES
    if np.linalg.norm(centre) > 1e-6:
        candidates = np.concatenate([-qnormalize(centre)[None, :], candidates], axis=0)
    # chordal distance² = 2 − 2⟨c, p⟩
    best_dot = np.max(pts @ candidates.T, axis=0)
    k = int(np.argmin(best_dot))
    clearance = _clearance(float(best_dot[k]), step)
    if clearance < min_clearance:
        raise NoUnhitPoint(
            "boundary comes too close to every candidate pole", {"clearance": clearance, "step": float(step)}
        )
    return candidates[k], clearance


def _clearance(best_dot: float, step: float) -> float:
    angle = 2.0 * np.arcsin(min(1.0, np.sqrt(max(0.0, 2.0 - 2.0 * best_dot)) / 2.0)) - step / 2.0
    return float(2.0 * np.sin(max(0.0, angle) / 2.0))


def given_pole(
    samples: np.ndarray, pole: np.ndarray, min_clearance: float = MIN_CLEARANCE, step: float = 0.0
) -> Tuple[np.ndarray, float]:
    """A prescribed pole with its clearance, checked like :func:`unhit_point`.

    Fills of the same boundary sampled at several resolutions share one chart
    this way.
    """
    pole = qnormalize(np.asarray(pole, dtype=float))
    pts = np.asarray(samples, dtype=float).reshape(-1, 4)
    clearance = _clearance(float(np.max(pts @ pole)), step)
    if clearance < min_clearance:
        raise NoUnhitPoint("boundary comes too close to the given pole", {"clearance": clearance, "step": float(step)})
    return pole, clearance


def _choose_pole(samples: np.ndarray, step: float, pole: Optional[np.ndarray]) -> Tuple[np.ndarray, float]:
    if pole is None:
        return unhit_point(samples, step=step)
    return given_pole(samples, pole, step=step)


def sample_step(grid: np.ndarray) -> float:
    """Largest angle between neighbours along any sample axis of a grid."""
    grid = np.asarray(grid, dtype=float)
    steps = [
        float(np.max(qdist(np.take(grid, range(1, size), axis), np.take(grid, range(size - 1), axis))))
        for axis, size in enumerate(grid.shape[:-1])
        if size > 1
    ]
    return max(steps, default=0.0)


def to_chart(g: np.ndarray, pole: np.ndarray) -> np.ndarray:
    """Stereographic coordinates in R³ with ``pole`` sent to infinity."""
    h = qmul(-qconj(pole), g)
    return h[..., 1:] / (1.0 + h[..., :1])


def from_chart(v: np.ndarray, pole: np.ndarray) -> np.ndarray:
    r2 = np.sum(v * v, axis=-1, keepdims=True)
    h = np.concatenate([1.0 - r2, 2.0 * v], axis=-1) / (1.0 + r2)
    return qmul(-pole, h)


def _boundary_samples(*arrays: np.ndarray) -> np.ndarray:
    return np.concatenate([np.asarray(a).reshape(-1, 4) for a in arrays], axis=0)


def fill_square(p0: Path, p1: Path, rows: Optional[int] = None, pole: Optional[np.ndarray] = None) -> Square:
    """A homotopy rel endpoints from ``p0`` (s = 0) to ``p1`` (s = 1).

    ``pole`` fixes the chart instead of searching for an unhit point.
    """
    for where, a, b in (("start", p0.start, p1.start), ("end", p0.end, p1.end)):
        defect = match_defect(a, b)
        if defect > MATCH_TOL:
            raise BoundaryInconsistent("paths do not share their endpoints", {"edge": where, "defect": defect})
    n = max(p0.n, p1.n)
    p0, p1 = p0.resample(n), p1.resample(n)
    rows = n if rows is None else check_axis(rows, "s")

    step = max(sample_step(p0.grid), sample_step(p1.grid))
    pole, clearance = _choose_pole(_boundary_samples(p0.grid, p1.grid), step, pole)
    v0 = to_chart(p0.grid, pole)
    v1 = to_chart(p1.grid, pole)
    s = np.linspace(0.0, 1.0, rows + 1)[:, None, None]
    # column terms cancel for fixed endpoints
    grid = qnormalize(from_chart((1.0 - s) * v0[None] + s * v1[None], pole))

    grid[0], grid[-1] = p0.grid, p1.grid
    grid[:, 0] = p0.start
    grid[:, -1] = p0.end
    return Square(grid, meta={"pole": pole.tolist(), "clearance": clearance, "smoothness": _smoothness(grid)})


def _smoothness(grid: np.ndarray) -> float:
    """Largest adjacent-sample step inside over the largest step on the boundary rows."""
    inner = max(float(np.max(qdist(grid[:, 1:], grid[:, :-1]))), float(np.max(qdist(grid[1:], grid[:-1]))))
    edge = max(float(np.max(qdist(grid[0, 1:], grid[0, :-1]))), float(np.max(qdist(grid[-1, 1:], grid[-1, :-1]))))
    return inner / edge if edge > 0 else 0.0


_EDGES = (
    # (face, index, face, index): edge of the first face equals edge of the second
    ("r0", (0, slice(None)), "s0", (0, slice(None))),
    ("r0", (-1, slice(None)), "s1", (0, slice(None))),
    ("r1", (0, slice(None)), "s0", (-1, slice(None))),
    ("r1", (-1, slice(None)), "s1", (-1, slice(None))),
    ("r0", (slice(None), 0), "t0", (0, slice(None))),
    ("r0", (slice(None), -1), "t1", (0, slice(None))),
    ("r1", (slice(None), 0), "t0", (-1, slice(None))),
    ("r1", (slice(None), -1), "t1", (-1, slice(None))),
    ("s0", (slice(None), 0), "t0", (slice(None), 0)),
    ("s0", (slice(None), -1), "t1", (slice(None), 0)),
    ("s1", (slice(None), 0), "t0", (slice(None), -1)),
    ("s1", (slice(None), -1), "t1", (slice(None), -1)),
)


def check_faces(faces: Mapping[str, Square]) -> Tuple[int, int, int]:
    """Validate the six faces of a cube and return its (nr, ns, nt)."""
    missing = [name for name in FACES if name not in faces]
    if missing:
        raise BoundaryInconsistent("cube boundary is missing faces", {"missing": missing})
    ns, nt = faces["r0"].rows, faces["r0"].n
    nr = faces["s0"].rows
    shapes = {
        "r0": (ns, nt), "r1": (ns, nt),
        "s0": (nr, nt), "s1": (nr, nt),
        "t0": (nr, ns), "t1": (nr, ns),
    }
    for name, shape in shapes.items():
        got = (faces[name].rows, faces[name].n)
        if got != shape:
            raise BoundaryInconsistent("cube faces have inconsistent grids", {"face": name, "shape": list(got)})
    for a, ia, b, ib in _EDGES:
        defect = match_defect(faces[a].grid[ia], faces[b].grid[ib])
        if defect > MATCH_TOL:
            raise BoundaryInconsistent("cube faces disagree on a shared edge", {"edge": f"{a}/{b}", "defect": defect})
    return nr, ns, nt


def fill_cube(faces: Dict[str, Square], pole: Optional[np.ndarray] = None) -> Cube:
    """Fill a cube whose six faces are given as squares.

    Faces ``r0``/``r1`` are indexed [s, t], ``s0``/``s1`` [r, t] and
    ``t0``/``t1`` [r, s].
    """
    nr, ns, nt = check_faces(faces)
    grids = {name: faces[name].grid for name in FACES}
    step = max(sample_step(grid) for grid in grids.values())
    pole, clearance = _choose_pole(_boundary_samples(*grids.values()), step, pole)
    V = {name: to_chart(grid, pole) for name, grid in grids.items()}

    r = np.linspace(0.0, 1.0, nr + 1)[:, None, None, None]
    s = np.linspace(0.0, 1.0, ns + 1)[None, :, None, None]
    t = np.linspace(0.0, 1.0, nt + 1)[None, None, :, None]
    R0, R1, S0, S1, T0, T1 = (V[name] for name in FACES)

    Pr = (1 - r) * R0[None] + r * R1[None]
    Ps = (1 - s) * S0[:, None] + s * S1[:, None]
    Pt = (1 - t) * T0[:, :, None] + t * T1[:, :, None]
    PrPs = (
        (1 - r) * (1 - s) * R0[0][None, None] + (1 - r) * s * R0[-1][None, None]
        + r * (1 - s) * R1[0][None, None] + r * s * R1[-1][None, None]
    )
    PrPt = (
        (1 - r) * (1 - t) * R0[:, 0][None, :, None] + (1 - r) * t * R0[:, -1][None, :, None]
        + r * (1 - t) * R1[:, 0][None, :, None] + r * t * R1[:, -1][None, :, None]
    )
    PsPt = (
        (1 - s) * (1 - t) * S0[:, 0][:, None, None] + (1 - s) * t * S0[:, -1][:, None, None]
        + s * (1 - t) * S1[:, 0][:, None, None] + s * t * S1[:, -1][:, None, None]
    )
    PrPsPt = sum(
        wr * ws * wt * R[i, j]
        for wr, R in ((1 - r, R0), (r, R1))
        for ws, i in ((1 - s, 0), (s, -1))
        for wt, j in ((1 - t, 0), (t, -1))
    )
    blend = Pr + Ps + Pt - PrPs - PrPt - PsPt + PrPsPt
    grid = qnormalize(from_chart(blend, pole))

    grid[0], grid[-1] = grids["r0"], grids["r1"]
    grid[:, 0], grid[:, -1] = grids["s0"], grids["s1"]
    grid[:, :, 0], grid[:, :, -1] = grids["t0"], grids["t1"]
    logger.debug("Filled a %dx%dx%d cube, clearance %.3g", nr, ns, nt, clearance)
    return Cube(grid)


def homotopy_faces(m1: Square, m2: Square, depth: Optional[int] = None) -> Dict[str, Square]:
    """Faces of a cube from ``m1`` (r = 0) to ``m2`` (r = 1), constant in r elsewhere.

    Both squares must share their four boundary edges; rows are brought to a
    common count by geodesic resampling in s. ``depth`` is the number of r
    intervals and defaults to the t grid.
    """
    rows = max(m1.rows, m2.rows)
    m1, m2 = m1.resample_rows(rows), m2.resample_rows(rows)
    if m1.n != m2.n:
        raise BoundaryInconsistent("homotopies need a common t grid", {"n": [m1.n, m2.n]})
    for where, a, b in (
        ("source", m1.grid[0], m2.grid[0]),
        ("target", m1.grid[-1], m2.grid[-1]),
        ("start", m1.grid[:, 0], m2.grid[:, 0]),
        ("end", m1.grid[:, -1], m2.grid[:, -1]),
    ):
        defect = match_defect(a, b)
        if defect > MATCH_TOL:
            raise BoundaryMismatch("homotopies do not share their boundary", {"edge": where, "defect": defect})
    nr = m1.n if depth is None else check_axis(depth, "r")

    def flat(edge: np.ndarray) -> Square:
        return Square(np.broadcast_to(edge, (nr + 1,) + edge.shape).copy())

    return {
        "r0": m1,
        "r1": m2,
        "s0": flat(m1.grid[0]),
        "s1": flat(m1.grid[-1]),
        "t0": flat(m1.grid[:, 0]),
        "t1": flat(m1.grid[:, -1]),
    }
