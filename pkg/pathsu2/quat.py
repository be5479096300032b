"""Unit quaternions as points of SU(2).

Arrays carry quaternions in the last axis as (w, x, y, z); every kernel is
vectorized over the leading axes. Unlike rotation code, q and −q are distinct
group elements here, so slerp never flips the sign of its second argument.
"""

from __future__ import annotations

import numpy as np

from common.errors import InvalidGrid

UNIT_TOL = 1e-9
DOT_THRESHOLD = 0.9995
# perturbation axis for antipodal pairs and log(−1)
ANTIPODE_AXIS = np.array([1.0, 0.0, 0.0])

ONE = np.array([1.0, 0.0, 0.0, 0.0])


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p0, p1, p2, p3 = np.moveaxis(p, -1, 0)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
            p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
        ],
        axis=-1,
    )


def qconj(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qnormalize(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def check_unit(q: np.ndarray, tol: float = UNIT_TOL) -> np.ndarray:
    """Renormalize samples that are unit within ``tol``; raise otherwise."""
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != 4:
        raise InvalidGrid("quaternion arrays need a last axis of length 4", {"shape": list(q.shape)})
    norms = np.linalg.norm(q, axis=-1)
    worst = float(np.max(np.abs(norms - 1.0))) if norms.size else 0.0
    if worst > tol:
        raise InvalidGrid("samples are not unit quaternions", {"defect": worst})
    return q / norms[..., None]


def qexp(v: np.ndarray) -> np.ndarray:
    """exp of a pure imaginary quaternion given by its 3-vector."""
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v, axis=-1, keepdims=True)
    scale = np.where(theta > 1e-12, np.sin(theta) / np.where(theta > 1e-12, theta, 1.0), 1.0 - theta**2 / 6.0)
    return np.concatenate([np.cos(theta), scale * v], axis=-1)


def qlog(q: np.ndarray) -> np.ndarray:
    """Principal logarithm as a 3-vector of length ≤ π; log(−1) = π·ANTIPODE_AXIS."""
    q = np.asarray(q, dtype=float)
    w = q[..., :1]
    xyz = q[..., 1:]
    s = np.linalg.norm(xyz, axis=-1, keepdims=True)
    theta = np.arctan2(s, w)
    small = s < 1e-12
    factor = np.where(small, 1.0, theta / np.where(small, 1.0, s))
    out = factor * xyz
    antipodal = (small & (w < 0))[..., 0]
    if np.any(antipodal):
        out = np.where(antipodal[..., None], np.pi * ANTIPODE_AXIS, out)
    return out


def qpow(q: np.ndarray, n: int) -> np.ndarray:
    """Integer power by repeated squaring; q^(−n) = conj(q)^n."""
    q = np.asarray(q, dtype=float)
    base = q if n >= 0 else qconj(q)
    e = abs(int(n))
    result = np.broadcast_to(ONE, q.shape).copy()
    while e:
        if e & 1:
            result = qmul(result, base)
        base = qmul(base, base)
        e >>= 1
    return result


def qdist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Angle between unit quaternions as vectors of R⁴."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return 2.0 * np.arctan2(np.linalg.norm(a - b, axis=-1), np.linalg.norm(a + b, axis=-1))


def slerp(a: np.ndarray, b: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Geodesic from a to b at fraction f, broadcast over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    f = np.asarray(f, dtype=float)[..., None]
    a, b = np.broadcast_arrays(a, b)
    dot = np.clip(np.sum(a * b, axis=-1, keepdims=True), -1.0, 1.0)

    near = dot > DOT_THRESHOLD
    linear = qnormalize(a + f * (b - a))

    theta = np.arccos(dot)
    sin_theta = np.sin(theta)
    safe = np.where(np.abs(sin_theta) > 1e-12, sin_theta, 1.0)
    arc = (np.sin((1.0 - f) * theta) * a + np.sin(f * theta) * b) / safe

    out = np.where(near, linear, arc)
    antipodal = dot < -1.0 + 1e-12
    if np.any(antipodal):
        turned = qmul(a, qexp(np.pi * f * ANTIPODE_AXIS))
        out = np.where(antipodal, turned, out)
    return out


def geodesic(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """n+1 samples of the shortest geodesic from a to b."""
    return slerp(a, b, np.linspace(0.0, 1.0, n + 1))


def one_parameter(log_g: np.ndarray, n: int) -> np.ndarray:
    """Samples of t ↦ exp(t·log_g) on a uniform grid."""
    t = np.linspace(0.0, 1.0, n + 1)[:, None]
    return qexp(t * np.asarray(log_g, dtype=float))


def random_unit(rng: np.random.Generator, size=None) -> np.ndarray:
    shape = (4,) if size is None else tuple(np.atleast_1d(size)) + (4,)
    return qnormalize(rng.standard_normal(shape))
