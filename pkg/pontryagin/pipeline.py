"""Cocycle values g_ijkl = exp(2πi ∫H*ν) and the first Pontryagin class.

Each quadruple value is the enclosed ν-volume of the closed cycle of
homotopies γ_ijl, γ_jkl, the associator, γ_ijk and γ_ikl around the five
bracketings of γ_kl ∘ γ_jk ∘ γ_ij. Paths carry ``T_REFINE`` samples per
grid interval, so each of the three edge paths keeps at least ``n``
intervals once whiskering halves and the associator quarters it. The volume
is extrapolated from the grid and a coarse companion grid sharing one chart,
which removes the leading quadrature error.

Values are known mod 1 only; they are lifted to real numbers continuously
inside the star of each quadruple by following straight arcs (in barycentric
weights) from the quadruple barycentre to the barycentres of its two
quintuples.
"""

from __future__ import annotations

import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from celery.utils.log import get_logger

from cech.classes import local_circle_class, pair
from cech.cochain import Cochain
from common import angles
from common.config import get_settings
from common.errors import NumericDefectExceeded, ValidationFailure
from common.models import Coeff, join_key
from pathsu2.compose import associator_square, whisker_left, whisker_right
from pathsu2.fill import sample_step, unhit_point
from pathsu2.grids import MIN_SAMPLES, check_axis, stack_squares
from pathsu2.homotopy import enclosed_volume
from pontryagin.clutch import DEFAULT_SIGMA, Clutch
from pontryagin.cover import segment
from pontryagin.lifts import square_gamma, transported_gamma

logger = get_logger(__name__)

MIN_GRID = 16
DEFAULT_ARC_STEPS = 3
# a lifted step this large can no longer be told apart from a wrap
MAX_ARC_STEP = 0.25
# path samples per grid interval
T_REFINE = 4

Quad = Tuple[int, int, int, int]
Point = Tuple[Quad, Optional[Tuple[int, ...]], int, np.ndarray]
# (k, grid, quadruple, weights, sigma) for one evaluation
Evaluator = Callable[[List[Tuple[Any, ...]]], List[float]]


def coarse_grid(n: int) -> int:
    """Companion grid for the extrapolation: about n/2, a multiple of 4."""
    return max(MIN_SAMPLES, (n // 8) * 4)


def cocycle_loop(c: Clutch, quad: Sequence[int], m: np.ndarray, n: int):
    """The self-homotopy of γ_il whose enclosed volume is g_ijkl(m).

    Homotopies take ``n`` rows and paths ``T_REFINE·n`` samples.
    """
    i, j, k, l = quad  # noqa: E741
    m = np.asarray(m, dtype=float)
    rows = check_axis(n, "s")
    nt = T_REFINE * rows
    g_ij = c.transition(i, j, m)
    g_ik = c.transition(i, k, m)
    c12 = transported_gamma(c, i, j, m, nt)
    c23 = transported_gamma(c, j, k, m, nt).translate(g_ij)
    c34 = transported_gamma(c, k, l, m, nt).translate(g_ik)
    parts = [
        square_gamma(c, i, j, l, m, nt, rows),
        whisker_right(square_gamma(c, j, k, l, m, nt, rows).translate(g_ij), c12),
        associator_square(c34, c23, c12, rows=rows),
        whisker_left(c34, square_gamma(c, i, j, k, m, nt, rows)).reverse(),
        square_gamma(c, i, k, l, m, nt, rows).reverse(),
    ]
    return stack_squares(parts)


def cocycle_value(
    c: Clutch, i: int, j: int, k: int, l: int, m: np.ndarray, n: int, extrapolate: bool = True  # noqa: E741
) -> float:
    """g_ijkl(m) as an angle in [0, 1).

    With ``extrapolate`` the volumes at ``n`` and ``coarse_grid(n)`` are
    combined as V + (V − V_coarse)/(r² − 1), r the ratio of the grids.
    """
    n = check_axis(n)
    if c.exponent(i, j) == 0 and c.exponent(j, k) == 0 and c.exponent(k, l) == 0:
        return 0.0
    quad = (i, j, k, l)
    fine = cocycle_loop(c, quad, m, n)
    coarse_n = coarse_grid(n)
    if not extrapolate or coarse_n >= n:
        return angles.wrap(enclosed_volume(fine, depth=n))
    coarse = cocycle_loop(c, quad, m, coarse_n)
    pole, _ = unhit_point(coarse.grid, step=sample_step(coarse.grid))
    volume = enclosed_volume(fine, n, pole)
    correction = float(angles.nearest(volume - enclosed_volume(coarse, coarse_n, pole)))
    return angles.wrap(volume + correction / ((n / coarse_n) ** 2 - 1.0))


def evaluate_locally(arg_lists: List[Tuple[Any, ...]]) -> List[float]:
    out = []
    for k, n, quad, weights, sigma in arg_lists:
        out.append(cocycle_value(Clutch(k, tuple(sigma)), *quad, np.asarray(weights), n))
    return out


def evaluation_points(c: Clutch, steps: int = DEFAULT_ARC_STEPS) -> List[Point]:
    """(quadruple, quintuple or None, step, weights) in a fixed order.

    Step 0 is the quadruple barycentre and belongs to no arc; steps 1..S run
    along the arc towards the quintuple barycentre.
    """
    if steps < 1:
        raise ValidationFailure("arcs need at least one step", {"steps": steps})
    K = c.cover.nerve
    points = []
    for quad in K.faces_of(3):
        start = c.cover.barycenter(quad)
        points.append((quad, None, 0, start))
        for top in K.faces_of(4):
            if not set(quad) <= set(top):
                continue
            end = c.cover.barycenter(top)
            for step in range(1, steps + 1):
                points.append((quad, top, step, segment(start, end, step / steps)))
    return points


def lift_arcs(
    points: Sequence[Point], values: Sequence[float]
) -> Tuple[Dict[Tuple[Quad, Tuple[int, ...]], float], float]:
    """Continuous real lifts at quintuple barycentres and the largest step taken."""
    start: Dict[Quad, float] = {}
    current: Dict[Tuple[Quad, Tuple[int, ...]], float] = {}
    previous: Dict[Tuple[Quad, Tuple[int, ...]], float] = {}
    worst = 0.0
    for (quad, top, step, _), value in zip(points, values):
        if top is None:
            start[quad] = float(angles.nearest(value))
            continue
        key = (quad, top)
        if step == 1:
            current[key], previous[key] = start[quad], start[quad]
        jump = float(angles.nearest(value - previous[key]))
        worst = max(worst, abs(jump))
        current[key] += jump
        previous[key] = value
    return current, worst


def compute_p1(
    k: int,
    n: int,
    sigma: Sequence[int] = DEFAULT_SIGMA,
    arc_steps: int = DEFAULT_ARC_STEPS,
    delta_tol: Optional[float] = None,
    integrality_tol: Optional[float] = None,
    evaluate: Optional[Evaluator] = None,
) -> Dict[str, Any]:
    """Extract the integer class of the clutched bundle of instanton number k.

    ``evaluate`` maps argument tuples to cocycle values; the task layer passes
    one that fans out over Celery. The default runs them in-process.
    """
    settings = get_settings()
    delta_tol = settings.delta_tol if delta_tol is None else delta_tol
    integrality_tol = settings.integrality_tol if integrality_tol is None else integrality_tol
    if n < MIN_GRID:
        raise ValidationFailure(f"compute_p1 needs a grid of at least {MIN_GRID}", {"grid": n})
    n = check_axis(n)
    c = Clutch(int(k), tuple(sigma))
    K = c.cover.nerve

    started = time.perf_counter()
    points = evaluation_points(c, arc_steps)
    arg_lists = [(c.k, n, list(quad), w.tolist(), list(c.sigma)) for quad, _, _, w in points]
    values = [float(v) for v in (evaluate or evaluate_locally)(arg_lists)]
    lifted, max_step = lift_arcs(points, values)
    elapsed = time.perf_counter() - started
    logger.info("Evaluated %d cocycle values at k=%d, N=%d in %.1fs", len(values), k, n, elapsed)

    at_top = {(quad, top): value for (quad, top, step, _), value in zip(points, values) if step == arc_steps}
    rows, raw = [], []
    for top in K.faces_of(4):
        faces = [top[:a] + top[a + 1:] for a in range(len(top))]
        rows.append([lifted[(face, top)] for face in faces])
        raw.append([at_top[(face, top)] for face in faces])
    rows_arr = np.array(rows)
    signs = np.array([(-1) ** a for a in range(5)], dtype=float)
    sums = rows_arr @ signs
    delta_defect = angles.max_dist(np.array(raw) @ signs)
    integrality_defect = angles.max_dist(sums)
    worst_top = join_key(K.faces_of(4)[int(np.argmax(angles.dist(sums)))])

    defects = {"delta": delta_defect, "integrality": integrality_defect, "arc_step": max_step}
    if delta_defect > delta_tol:
        raise NumericDefectExceeded("cocycle condition fails beyond tolerance", {"face": worst_top, **defects})
    if integrality_defect > integrality_tol or max_step > MAX_ARC_STEP:
        raise NumericDefectExceeded("lifted coboundary is not integral", {"face": worst_top, **defects})

    cls = local_circle_class(K, 3, rows_arr, max(integrality_tol, delta_tol))
    cochain = Cochain(K, 4, Coeff.INTEGER, np.rint(sums).astype(np.int64))
    pairing = pair(cochain)
    logger.info("p1 at k=%d, N=%d: class=%s pairing=%d defects=%s", k, n, cls.free, pairing, defects)
    return {
        "k": int(k),
        "grid": n,
        "class": cls.to_json(),
        "pairing": pairing,
        "values": {
            f"{join_key(quad)}@{join_key(top)}": at_top[(quad, top)]
            for top in K.faces_of(4)
            for quad in (top[:a] + top[a + 1:] for a in range(len(top)))
        },
        "defects": defects,
        "timings": {"evaluate": elapsed},
    }
