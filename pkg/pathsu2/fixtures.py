"""Seeded paths for the path-space checks."""

from __future__ import annotations

from typing import List

import numpy as np

from pathsu2.grids import Path
from pathsu2.quat import geodesic, qexp, qmul, random_unit


def random_step(rng: np.random.Generator, spread: float) -> np.ndarray:
    v = rng.standard_normal(3)
    return qexp(v / np.linalg.norm(v) * rng.uniform(0.2, 1.0) * spread)


def random_chain(rng: np.random.Generator, length: int, n: int, spread: float = 0.6) -> List[Path]:
    """``length`` composable geodesic segments, earliest first."""
    x = random_unit(rng)
    chain = []
    for _ in range(length):
        y = qmul(x, random_step(rng, spread))
        chain.append(Path(geodesic(x, y, n)))
        x = chain[-1].end
    return chain
