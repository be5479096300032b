"""Arithmetic on angles in [0, 1) representing u = exp(2πi·angle)."""

from __future__ import annotations

from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


def wrap(x: ArrayLike) -> ArrayLike:
    """Reduce modulo 1 into [0, 1)."""
    y = np.mod(x, 1.0)
    # np.mod(-1e-17, 1.0) == 1.0
    y = np.where(y >= 1.0, 0.0, y)
    if np.ndim(y) == 0:
        return float(y)
    return y


def dist(x: ArrayLike) -> ArrayLike:
    """Distance from x to the nearest integer, i.e. angle distance to 0."""
    d = np.abs(np.asarray(x, dtype=float) - np.round(x))
    if np.ndim(d) == 0:
        return float(d)
    return d


def max_dist(x: ArrayLike) -> float:
    arr = np.asarray(x, dtype=float)
    if arr.size == 0:
        return 0.0
    return float(np.max(dist(arr)))


def nearest(x: ArrayLike) -> ArrayLike:
    """Representative of x modulo 1 in [-1/2, 1/2)."""
    return np.asarray(x, dtype=float) - np.floor(np.asarray(x, dtype=float) + 0.5)


def add(*xs: float) -> float:
    return float(wrap(sum(xs)))


def close(a: float, b: float, tol: float) -> bool:
    return dist(a - b) <= tol
