"""Phases of homotopies: equivalence of 2-cells and enclosed volumes.

A 2-cell is a pair (m, z) of a homotopy rel endpoints and a phase in ℝ/ℤ.
Two 2-cells with the same boundary are equivalent when some filling F from
m₁ to m₂ satisfies z₂ = z₁ + ∫F*ν mod 1; the integral does not depend on
the filling modulo integers.
"""

from __future__ import annotations

from typing import Any, Dict, Optional

import numpy as np
from celery.utils.log import get_logger

from common import angles
from common.config import get_settings
from pathsu2.compose import associator_square, compose_paths, whisker_left, whisker_right
from pathsu2.fill import fill_cube, homotopy_faces
from pathsu2.grids import Path, Square, constant_square, stack_squares
from pathsu2.nu import integrate_nu_cube
from pathsu2.quat import ONE, qexp, qmul

logger = get_logger(__name__)


def homotopy_integral(
    m1: Square, m2: Square, depth: Optional[int] = None, pole: Optional[np.ndarray] = None
) -> float:
    """∫ν over a filling from ``m1`` to ``m2`` (real-valued)."""
    return integrate_nu_cube(fill_cube(homotopy_faces(m1, m2, depth), pole))


def equiv_check(m1: Square, z1: float, m2: Square, z2: float, tol: Optional[float] = None) -> bool:
    tol = get_settings().pi2_tol if tol is None else tol
    defect = angles.dist(z2 - z1 - homotopy_integral(m1, m2))
    logger.debug("2-cell equivalence defect %.3g", defect)
    return defect <= tol


def enclosed_volume(loop: Square, depth: Optional[int] = None, pole: Optional[np.ndarray] = None) -> float:
    """∫ν over a filling of a self-homotopy of a path, as a real number."""
    return homotopy_integral(constant_square(loop.source, loop.rows), loop, depth, pole)


def pentagon_loop(c45: Path, c34: Path, c23: Path, c12: Path) -> Square:
    """The closed cycle of associator homotopies around the five bracketings."""
    d, c, b, a = c45, c34, c23, c12
    dc, ba, cb = compose_paths(d, c), compose_paths(b, a), compose_paths(c, b)
    n = max(p.n for p in (d, c, b, a))
    up1 = associator_square(dc, b, a, rows=n)
    up2 = associator_square(d, c, ba, rows=n)
    down1 = whisker_right(associator_square(d, c, b, rows=n), a)
    down2 = associator_square(d, cb, a, rows=n)
    down3 = whisker_left(d, associator_square(c, b, a, rows=n))
    return stack_squares([up1, up2, down3.reverse(), down2.reverse(), down1.reverse()])


def pentagon_defect(c45: Path, c34: Path, c23: Path, c12: Path) -> float:
    """Distance of the pentagon cycle's enclosed volume from an integer."""
    return angles.dist(enclosed_volume(pentagon_loop(c45, c34, c23, c12)))


def bubble_square(n: int, theta0: float = 1.0) -> Square:
    """A self-homotopy of the constant path at 1 sweeping a geodesic sphere.

    The interior sweeps the geodesic sphere of radius θ₀ about the identity
    once, right-translated so the boundary sits at 1; the enclosed volume
    is (θ₀ − sin θ₀ cos θ₀)/π.
    """
    s = np.linspace(0.0, 1.0, n + 1)[:, None]
    t = np.linspace(0.0, 1.0, n + 1)[None, :]
    polar = np.pi * (1.0 - np.sin(np.pi * s) * np.sin(np.pi * t))
    azimuth = np.arctan2(t - 0.5, s - 0.5)
    axis = np.stack(
        [np.cos(polar), np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth)], axis=-1
    )
    # the boundary maps to exp(−θ₀ e₁); translate it to the identity
    grid = qmul(qexp(theta0 * axis), qexp(np.array([theta0, 0.0, 0.0])))
    grid[0, :] = grid[-1, :] = grid[:, 0] = grid[:, -1] = ONE
    return Square(grid)


def bubble_volume(theta0: float = 1.0) -> float:
    return float((theta0 - np.sin(theta0) * np.cos(theta0)) / np.pi)


def bubble_report(n: int, tol: Optional[float] = None) -> Dict[str, Any]:
    """Attach a bubble to the constant 2-cell and compare the phase shift."""
    tol = get_settings().pi2_tol if tol is None else tol
    x = Path.constant(ONE, n)
    m1 = constant_square(x)
    m2 = stack_squares([m1, bubble_square(n)])
    expected = bubble_volume()
    measured = homotopy_integral(m1, m2)
    return {
        "expected": expected,
        "measured": measured,
        "defect": angles.dist(measured - expected),
        "equivalent": equiv_check(m1, 0.0, m2, expected, tol),
    }
