"""Descent of circle bundles along finite surjections.

A circle bundle on X with descent isomorphism is recorded by the phase
``phi(x1, x2)`` of the transport between the canonical trivializations over a
fiber pair. Descent picks the minimal section s of the surjection and
identifies every fiber with the one over s(m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from celery.utils.log import get_logger

from common import angles
from common.config import get_settings
from common.errors import CocycleFails, NotATrivialization, NotCompatible, SchemaError
from common.models import join_key
from gerbes.finite import FinGerbe, FinSurjection, Pair, Point

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class DescentBundle:
    surj: FinSurjection
    phi: Mapping[Pair, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi", {k: angles.wrap(v) for k, v in self.phi.items()})

    def transport(self, x1: Point, x2: Point) -> float:
        return self.phi.get((x1, x2), 0.0)

    def cocycle_defect(self) -> Tuple[float, Optional[Tuple[Point, ...]]]:
        worst, witness = 0.0, None
        for x in self.surj.total:
            d = angles.dist(self.transport(x, x))
            if d > worst:
                worst, witness = d, (x, x)
        for x1, x2, x3 in self.surj.tuples(3):
            d = angles.dist(self.transport(x1, x2) + self.transport(x2, x3) - self.transport(x1, x3))
            if d > worst:
                worst, witness = d, (x1, x2, x3)
        return worst, witness


def make_descent_bundle(surj: FinSurjection, phi: Mapping[Pair, float], tol: Optional[float] = None) -> DescentBundle:
    tol = get_settings().tol if tol is None else tol
    for key in phi:
        surj.check_same_fiber(*key)
    bundle = DescentBundle(surj, phi)
    defect, witness = bundle.cocycle_defect()
    if defect > tol:
        raise CocycleFails("descent cocycle fails", {"tuple": join_key(witness), "defect": defect})
    return bundle


@dataclass(frozen=True)
class Descended:
    """The bundle on M (canonically trivial over a finite base) with ψ: X → angle."""

    base: Tuple[Point, ...]
    psi: Dict[Point, float]

    def intertwining_defect(self, bundle: DescentBundle) -> float:
        """max |ψ(x₂) − ψ(x₁) − phi(x₁,x₂)| over fiber pairs."""
        return max(
            (angles.dist(self.psi[x2] - self.psi[x1] - bundle.transport(x1, x2)) for x1, x2 in bundle.surj.tuples(2)),
            default=0.0,
        )


def descend(bundle: DescentBundle, tol: Optional[float] = None) -> Descended:
    tol = get_settings().tol if tol is None else tol
    defect, witness = bundle.cocycle_defect()
    if defect > tol:
        raise CocycleFails("descent cocycle fails", {"tuple": join_key(witness), "defect": defect})
    surj = bundle.surj
    psi = {x: bundle.transport(surj.section(surj.proj[x]), x) for x in surj.total}
    return Descended(surj.base, psi)


def map_defect(P: DescentBundle, Q: DescentBundle, shift: Mapping[Point, float]) -> float:
    """Failure of F ∘ phi_P = phi_Q ∘ F for the fiberwise shift F."""
    return max(
        (
            angles.dist(shift[x2] + P.transport(x1, x2) - shift[x1] - Q.transport(x1, x2))
            for x1, x2 in P.surj.tuples(2)
        ),
        default=0.0,
    )


def descend_map(
    P: DescentBundle, Q: DescentBundle, shift: Mapping[Point, float], tol: Optional[float] = None
) -> Dict[Point, float]:
    """D(F): the shift induced on M by a compatible map F: (P, phi) → (Q, psi)."""
    tol = get_settings().tol if tol is None else tol
    if P.surj is not Q.surj and P.surj.proj != Q.surj.proj:
        raise SchemaError("bundles live on different surjections", {})
    defect = map_defect(P, Q, shift)
    if defect > tol:
        raise NotCompatible("map does not commute with the descent isomorphisms", {"defect": defect})
    surj = P.surj
    return {m: angles.wrap(shift[surj.section(m)]) for m in surj.base}


def tensor(P: DescentBundle, Q: DescentBundle) -> DescentBundle:
    return DescentBundle(P.surj, {pair: P.transport(*pair) + Q.transport(*pair) for pair in P.surj.tuples(2)})


def monoidal_check(
    P: DescentBundle,
    Q: DescentBundle,
    maps: Optional[Tuple[DescentBundle, DescentBundle, Mapping[Point, float], Mapping[Point, float]]] = None,
) -> float:
    """Mismatch of D(P)⊗D(Q) against D(P⊗Q), and of D(F⊗G) against D(F)⊗D(G)."""
    dp, dq, dpq = descend(P), descend(Q), descend(tensor(P, Q))
    worst = max(angles.dist(dpq.psi[x] - dp.psi[x] - dq.psi[x]) for x in P.surj.total)
    if maps is not None:
        P2, Q2, F, G = maps
        FG = {x: F[x] + G[x] for x in P.surj.total}
        both = descend_map(tensor(P, Q), tensor(P2, Q2), FG)
        separate = descend_map(P, P2, F), descend_map(Q, Q2, G)
        worst = max(worst, max(angles.dist(both[m] - separate[0][m] - separate[1][m]) for m in P.surj.base))
    return worst


def trivialization_defect(G: FinGerbe, T: Mapping[Pair, float]) -> Tuple[float, Optional[Tuple[Point, ...]]]:
    """Largest failure of T(x2,x3) − T(x1,x3) + T(x1,x2) = c(x1,x2,x3)."""
    worst, witness = 0.0, None

    def t(a: Point, b: Point) -> float:
        return T.get((a, b), 0.0)

    for x1, x2, x3 in G.surj.tuples(3):
        d = angles.dist(t(x2, x3) - t(x1, x3) + t(x1, x2) - G.phase(x1, x2, x3))
        if d > worst:
            worst, witness = d, (x1, x2, x3)
    return worst, witness


def trivialization_difference(
    G: FinGerbe, T1: Mapping[Pair, float], T2: Mapping[Pair, float], tol: Optional[float] = None
) -> Descended:
    """Descend the bundle T1 − T2 of two trivializations of G."""
    tol = get_settings().tol if tol is None else tol
    for name, T in (("T1", T1), ("T2", T2)):
        defect, witness = trivialization_defect(G, T)
        if defect > tol:
            raise NotATrivialization(
                f"{name} is not a trivialization", {"triple": join_key(witness), "defect": defect}
            )
    difference = DescentBundle(
        G.surj, {pair: T1.get(pair, 0.0) - T2.get(pair, 0.0) for pair in G.surj.tuples(2)}
    )
    return descend(difference, tol)
