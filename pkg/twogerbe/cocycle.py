"""Čech 3-cocycle of a finite 2-gerbe over a cover of M.

Over U_i pick a point s_i(m) of X_m, over U_ij a point σ_ij(m) of Y above
(s_i(m), s_j(m)) and over U_ijk a phase ρ_ijk(m) of Q(m(σ_jk, σ_ij), σ_ik).
Two routes from ((σ_kl σ_jk) σ_ij) to σ_il through Q differ by the angle
ε_ijkl(m): one goes through the associator and ρ_ijk, ρ_ikl, the other through
ρ_jkl, ρ_ijl. The values live on the pointwise nerve of the cover, so δ is
evaluated at each point separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from celery.utils.log import get_logger

from cech.cochain import Cochain, delta
from cech.complex import Complex, pointwise_nerve
from common import angles
from common.errors import NotAssociative, NotCompatible, ValidationFailure
from common.models import Coeff
from gerbes.finite import Point
from twogerbe.model import Fin2Gerbe, validate_2gerbe

logger = get_logger(__name__)

# check name -> error raised when extraction meets an invalid 2-gerbe
FAILURES = {
    "gerbe": NotAssociative,
    "associator_descent": NotAssociative,
    "coherence": NotAssociative,
    "product": NotCompatible,
}


@dataclass(frozen=True, eq=False)
class CechChoices:
    """Section data; keys put the cover indices first and the base point last."""

    cover: Tuple[frozenset, ...]
    s: Dict[Tuple[int, Point], Point]
    sigma: Dict[Tuple[int, int, Point], Point]
    rho: Dict[Tuple[int, int, int, Point], float] = field(default_factory=dict)

    @property
    def nerve(self) -> Complex:
        return pointwise_nerve(self.cover)


def _members(cover: Sequence[frozenset], m: Point) -> List[int]:
    return [i for i, U in enumerate(cover) if m in U]


def _points(cover: Sequence[frozenset]) -> List[Point]:
    return sorted(set().union(*cover), key=str)


def _check_cover(g: Fin2Gerbe, cover: Sequence[frozenset]) -> None:
    if not cover:
        raise ValidationFailure("cover must have at least one set")
    outside = set().union(*cover) - set(g.surj.base)
    if outside:
        raise ValidationFailure("cover names points outside the base", {"point": str(sorted(outside, key=str)[0])})


def default_choices(g: Fin2Gerbe, cover: Sequence[frozenset]) -> CechChoices:
    """Minimal points everywhere and ρ = 0."""
    _check_cover(g, cover)
    s, sigma = {}, {}
    for m in _points(cover):
        members = _members(cover, m)
        for i in members:
            s[(i, m)] = g.surj.section(m)
        for i, j in combinations(members, 2):
            sigma[(i, j, m)] = g.fiber(s[(i, m)], s[(j, m)])[0]
    return CechChoices(tuple(cover), s, sigma)


def random_choices(g: Fin2Gerbe, cover: Sequence[frozenset], rng: np.random.Generator) -> CechChoices:
    _check_cover(g, cover)
    s, sigma, rho = {}, {}, {}
    for m in _points(cover):
        members = _members(cover, m)
        xs = g.surj.fiber(m)
        for i in members:
            s[(i, m)] = xs[int(rng.integers(len(xs)))]
        for i, j in combinations(members, 2):
            ys = g.fiber(s[(i, m)], s[(j, m)])
            sigma[(i, j, m)] = ys[int(rng.integers(len(ys)))]
        for i, j, k in combinations(members, 3):
            rho[(i, j, k, m)] = float(rng.random())
    return CechChoices(tuple(cover), s, sigma, rho)


def _epsilon(g: Fin2Gerbe, ch: CechChoices, m: Point, i: int, j: int, k: int, l: int) -> float:
    def sig(a: int, b: int) -> Point:
        return ch.sigma[(a, b, m)]

    def r(a: int, b: int, c: int) -> float:
        return ch.rho.get((a, b, c, m), 0.0)

    A, B, C = sig(k, l), sig(j, k), sig(i, j)
    AB, BC = g.mul(A, B), g.mul(B, C)
    P = g.mul(AB, C)
    abc = g.mul(A, BC)
    a_ik = g.mul(A, sig(i, k))
    jl_c = g.mul(sig(j, l), C)
    way1 = (
        g.assoc((A, B, C))
        + r(i, j, k)
        + g.lam((A, BC), (A, sig(i, k)))
        + g.phase(P, abc, a_ik)
        + r(i, k, l)
        + g.phase(P, a_ik, sig(i, l))
    )
    way2 = r(j, k, l) + g.lam((AB, C), (sig(j, l), C)) + r(i, j, l) + g.phase(P, jl_c, sig(i, l))
    return way2 - way1


def require_valid(g: Fin2Gerbe, tol: Optional[float] = None) -> None:
    """Raise the failure of the first check ``validate_2gerbe`` rejects."""
    report = validate_2gerbe(g, tol)
    if report.passed:
        return
    failed = sorted(name for name, entry in report.entries.items() if not entry.passed)
    entry = report.entries[failed[0]]
    error = FAILURES.get(failed[0], ValidationFailure)
    raise error(f"2-gerbe fails its {failed[0]} check", {"failed": failed, "max_defect": entry.max_defect, **entry.witness})


def extract_3cocycle(
    g: Fin2Gerbe,
    choices: Optional[CechChoices] = None,
    cover: Optional[Sequence[frozenset]] = None,
    tol: Optional[float] = None,
) -> Cochain:
    """Circle 3-cochain ε on the pointwise nerve of the cover; invalid 2-gerbes raise."""
    require_valid(g, tol)
    if choices is None:
        if cover is None:
            cover = [frozenset(g.surj.base)]
        choices = default_choices(g, cover)
    K = choices.nerve

    def value(face: Tuple[int, ...]) -> float:
        labels = [K.labels[v] for v in face]
        m = labels[0][0]
        i, j, k, l = (label[1] for label in labels)
        return _epsilon(g, choices, m, i, j, k, l)

    eps = Cochain.from_function(K, 3, Coeff.CIRCLE, value)
    logger.debug("Extracted ε on %d faces", K.count(3))
    return eps


def cocycle_defect(eps: Cochain) -> float:
    """Largest |δε| as an angle distance."""
    return delta(eps).max_abs()


def gauge_difference(first: Cochain, second: Cochain) -> float:
    """Worst angle distance between two extractions on the same nerve."""
    return angles.max_dist(first.values - second.values) if first.values.size else 0.0
