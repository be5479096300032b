"""Integer cohomology of complexes and extraction of cohomology classes.

For ``A = D_{k-1}`` (δ into degree k) the Smith form ``U A V = S`` gives
coordinates ``y = U n`` on k-cochains in which the coboundaries are exactly
``{y_i ∈ d_i ℤ (i < r), y_i = 0 (i ≥ r)}``. Torsion coordinates of a cocycle
are ``y_i mod d_i`` for the divisors ``d_i > 1``; the free coordinates come
from a second Smith form of the cocycle condition restricted to ``y[r:]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from celery.utils.log import get_logger

from cech.cochain import Cochain, coboundary_matrix, delta
from cech.complex import Complex
from cech.snf import SmithForm, as_int_matrix, smith_normal_form, solve_integer
from common import angles
from common.errors import (
    ComplexMismatch,
    DegreeOutOfRange,
    NonIntegralLift,
    NotACocycle,
    NotTrivial,
    ValidationFailure,
)
from common.models import Coeff, join_key

logger = get_logger(__name__)

LIFT_INTEGRALITY_BOUND = 0.25


@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    free: Tuple[int, ...] = ()
    torsion: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "free", tuple(int(v) for v in self.free))
        object.__setattr__(self, "torsion", tuple((int(v) % int(d), int(d)) for v, d in self.torsion))

    def _check(self, other: "CohomologyClass") -> None:
        if (
            other.degree != self.degree
            or len(other.free) != len(self.free)
            or [d for _, d in other.torsion] != [d for _, d in self.torsion]
        ):
            raise ComplexMismatch("classes live in different groups", {"degrees": [self.degree, other.degree]})

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._check(other)
        return CohomologyClass(
            self.degree,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple((a + b, d) for (a, d), (b, _) in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> "CohomologyClass":
        return CohomologyClass(self.degree, tuple(-a for a in self.free), tuple((-a, d) for a, d in self.torsion))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.free) and all(a == 0 for a, _ in self.torsion)

    def to_json(self) -> dict:
        return {"degree": self.degree, "free": list(self.free), "torsion": [list(t) for t in self.torsion]}


@dataclass(frozen=True, eq=False)
class _DegreeBasis:
    """Smith data needed to read off classes in one degree."""

    incoming: SmithForm
    cocycle: SmithForm
    torsion_orders: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def rank_in(self) -> int:
        return self.incoming.rank


@lru_cache(maxsize=64)
def _basis(K: Complex, k: int) -> _DegreeBasis:
    incoming = smith_normal_form(coboundary_matrix(K, k - 1))
    r = incoming.rank
    B = as_int_matrix(coboundary_matrix(K, k)) @ incoming.U_inv
    cocycle = smith_normal_form(B[:, r:])
    torsion = [(i, d) for i, d in enumerate(incoming.divisors) if d > 1]
    logger.debug("degree %d basis: rank_in=%d rank_cocycle=%d torsion=%s", k, r, cocycle.rank, torsion)
    return _DegreeBasis(incoming, cocycle, torsion)


def cohomology(K: Complex, k: int) -> Tuple[int, List[int]]:
    """(betti number, torsion orders) of H^k(K; ℤ)."""
    K.check_degree(k)
    rank_out = smith_normal_form(coboundary_matrix(K, k)).rank
    incoming = smith_normal_form(coboundary_matrix(K, k - 1))
    betti = K.count(k) - rank_out - incoming.rank
    return betti, [d for d in incoming.divisors if d > 1]


def class_of(n: Cochain, require_cocycle: bool = True) -> CohomologyClass:
    if n.coeff is not Coeff.INTEGER:
        raise ValidationFailure("class_of needs an integer cochain", {"coeff": n.coeff.value})
    K, k = n.complex, n.degree
    K.check_degree(k)
    if require_cocycle:
        dn = delta(n)
        if not dn.is_zero():
            face = dn.faces[int(np.flatnonzero(dn.values)[0])]
            raise NotACocycle("integer cochain is not a cocycle", {"face": join_key(face), "value": dn[face]})
    basis = _basis(K, k)
    r = basis.rank_in
    y = basis.incoming.U @ as_int_matrix(n.values)
    torsion = tuple((y[i], d) for i, d in basis.torsion_orders)
    z = basis.cocycle.V_inv @ y[r:]
    free = tuple(z[basis.cocycle.rank:])
    return CohomologyClass(k, free, torsion)


def generators(K: Complex, k: int) -> List[Cochain]:
    """Integer cocycles representing the free basis of H^k(K; ℤ)."""
    basis = _basis(K, k)
    r = basis.rank_in
    out = []
    for col in range(basis.cocycle.rank, basis.cocycle.V.shape[1]):
        y = np.zeros(K.count(k), dtype=object)
        y[r:] = basis.cocycle.V[:, col]
        out.append(Cochain(K, k, Coeff.INTEGER, np.array(list(basis.incoming.U_inv @ y), dtype=np.int64)))
    return out


def local_circle_class(
    K: Complex, degree: int, lifts: np.ndarray, tol: float
) -> CohomologyClass:
    """Class of a circle cocycle given real lifts local to each (degree+1)-face.

    ``lifts[j]`` holds the degree+2 real lifts of the values on the faces of the
    j-th (degree+1)-face, listed by omitted vertex. They need only agree with
    the cocycle mod 1; the alternating sum of each row is rounded.
    """
    lifts = np.asarray(lifts, dtype=float).reshape(K.count(degree + 1), degree + 2)
    signs = np.array([(-1) ** i for i in range(degree + 2)], dtype=float)
    sums = lifts @ signs
    rounded = np.rint(sums)
    residual = np.abs(sums - rounded)
    if residual.size:
        worst = int(np.argmax(residual))
        face = K.faces_of(degree + 1)[worst]
        if residual[worst] > LIFT_INTEGRALITY_BOUND:
            raise NonIntegralLift(
                "lifted coboundary is far from integral",
                {"face": join_key(face), "defect": float(residual[worst])},
            )
        if residual[worst] > tol:
            raise NotACocycle(
                "circle cochain is not a cocycle",
                {"face": join_key(face), "defect": float(residual[worst])},
            )
    n = Cochain(K, degree + 1, Coeff.INTEGER, rounded.astype(np.int64))
    return class_of(n)


def _principal_lifts(g: Cochain) -> np.ndarray:
    K, k = g.complex, g.degree
    rows = []
    for face in K.faces_of(k + 1):
        rows.append([g[face[:i] + face[i + 1:]] for i in range(len(face))])
    return np.array(rows, dtype=float).reshape(K.count(k + 1), k + 2)


def circle_class(g: Cochain, tol: float) -> CohomologyClass:
    """Integer class in degree k+1 of a circle-valued k-cocycle (Bockstein)."""
    if g.coeff is not Coeff.CIRCLE:
        raise ValidationFailure("circle_class needs a circle cochain", {"coeff": g.coeff.value})
    K, k = g.complex, g.degree
    K.check_degree(k)
    if k + 1 > K.dim:
        return CohomologyClass(k + 1)
    dg = delta(g)
    if dg.max_abs() > tol:
        worst = int(np.argmax(angles.dist(dg.values)))
        raise NotACocycle(
            "circle cochain is not a cocycle",
            {"face": join_key(dg.faces[worst]), "defect": float(angles.dist(dg.values[worst]))},
        )
    return local_circle_class(K, k, _principal_lifts(g), max(tol, 1e-12))


def trivialize_circle(g: Cochain, tol: float) -> Cochain:
    """A circle (k-1)-cochain h with δh = g, or NotTrivial.

    The lift of g is corrected by an integer cochain into a real cocycle and
    then solved for in least squares. On complexes with H^k(K; ℝ) ≠ 0 the real
    class must also be integral for h to exist.
    """
    K, k = g.complex, g.degree
    if k < 1:
        raise DegreeOutOfRange("trivialize needs degree >= 1", {"degree": k})
    cls = circle_class(g, tol)
    if not cls.is_zero():
        raise NotTrivial("circle cocycle has a nonzero class", {"class": cls.to_json()})

    a = g.values.astype(float)
    if k + 1 <= K.dim:
        n = np.rint(coboundary_matrix(K, k).astype(float) @ a).astype(np.int64)
        m = solve_integer(smith_normal_form(coboundary_matrix(K, k)), n)
        if m is None:
            raise NotTrivial("integer coboundary has no integer primitive", {})
        a = a - np.array(list(m), dtype=float)

    D = coboundary_matrix(K, k - 1).astype(float)
    gens = generators(K, k)
    if gens:
        Z = np.stack([z.values.astype(float) for z in gens], axis=1)
        sol, *_ = np.linalg.lstsq(np.hstack([D, Z]), a, rcond=None)
        coeffs = sol[D.shape[1]:]
        off = angles.max_dist(coeffs)
        if off > 10 * tol:
            raise NotTrivial("real class is not integral", {"coefficients": [float(c) for c in coeffs]})
        a = a - Z @ np.rint(coeffs)
    h_values, *_ = np.linalg.lstsq(D, a, rcond=None)
    h = Cochain(K, k - 1, Coeff.CIRCLE, h_values)
    defect = (delta(h) - g).max_abs()
    if defect > 10 * tol:
        raise NotTrivial("no circle primitive within tolerance", {"defect": defect})
    return h


def torsion_circle_cocycle(K: Complex, k: int, which: int = 0) -> Cochain:
    """Circle (k-1)-cocycle whose class is the chosen torsion generator of H^k."""
    K.check_degree(k)
    basis = _basis(K, k)
    if which >= len(basis.torsion_orders):
        raise ValidationFailure("no such torsion generator", {"degree": k, "torsion": len(basis.torsion_orders)})
    i, d = basis.torsion_orders[which]
    # δ(V e_i) = d · U⁻¹ e_i and U⁻¹ e_i has coordinate 1 at i
    z = np.array([int(v) for v in basis.incoming.V[:, i]], dtype=float)
    return Cochain(K, k - 1, Coeff.CIRCLE, z / d)


def fundamental_cycle(K: Complex) -> np.ndarray:
    """Generator of top-degree integer cycles, last top face oriented +1."""
    top = K.dim
    boundary = np.asarray(coboundary_matrix(K, top - 1)).T
    kernel = smith_normal_form(boundary).kernel()
    if kernel.shape[1] != 1:
        raise ValidationFailure("complex is not an orientable pseudomanifold", {"cycles": int(kernel.shape[1])})
    cycle = np.array([int(v) for v in kernel[:, 0]], dtype=np.int64)
    nonzero = np.flatnonzero(cycle)
    if cycle[nonzero[-1]] < 0:
        cycle = -cycle
    return cycle


def pair(n: Cochain, cycle: Optional[Sequence[int]] = None) -> int:
    """Evaluation of a top-degree integer cochain on the fundamental cycle."""
    if cycle is None:
        cycle = fundamental_cycle(n.complex)
    return int(np.dot(np.asarray(n.values, dtype=np.int64), np.asarray(cycle, dtype=np.int64)))
