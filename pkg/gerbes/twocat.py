"""Transformations between gerbe morphisms and their compositions.

A transformation f ⇒ g is a section of the circle bundle D_{f,g} on M. Its
lift to X is a section θ̂ of D̂_{f,g}, x ↦ Q_(f x, g x), that is compatible with
the transport φ_{f,g}; descending evaluates the lift on the minimal section
of the surjection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

from celery.utils.log import get_logger

from common import angles
from common.config import get_settings
from common.errors import NotComposable, NotDescendable
from common.models import join_key
from gerbes.finite import GerbeMorphism, Point, compose_morphisms

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Transformation:
    source: GerbeMorphism
    target: GerbeMorphism
    theta: Mapping[Point, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.source.same_ends(self.target):
            raise NotComposable("transformation between morphisms with different ends", {})
        base = self.source.source.surj.base
        object.__setattr__(self, "theta", {m: angles.wrap(self.theta.get(m, 0.0)) for m in base})

    def __getitem__(self, m: Point) -> float:
        return self.theta[m]

    def distance(self, other: "Transformation") -> float:
        return max(angles.dist(self.theta[m] - other.theta[m]) for m in self.theta)

    def to_json(self) -> dict:
        return {"theta": {str(m): v for m, v in self.theta.items()}}


def phi_fg(f: GerbeMorphism, g: GerbeMorphism, x1: Point, x2: Point, v: float, u: float = 0.0) -> float:
    """Transport D̂_{f,g}|x1 → D̂_{f,g}|x2: v ↦ ĝ(u) · v · f̂(u⁻¹) for u ∈ P_(x1,x2).

    The result does not depend on the phase u.
    """
    P, Q = f.source, f.target
    P.surj.check_same_fiber(x1, x2)
    u_inv = P.inverse(x1, x2, u)
    f_u_inv = f.apply(x2, x1, u_inv)
    g_u = g.apply(x1, x2, u)
    w = Q.multiply(f(x2), f(x1), g(x1), f_u_inv, v)
    return Q.multiply(f(x2), g(x1), g(x2), w, g_u)


def identity_transformation(f: GerbeMorphism) -> Transformation:
    return Transformation(f, f, {})


def lift_section(t: Transformation) -> Dict[Point, float]:
    f, g = t.source, t.target
    surj = f.source.surj
    return {x: phi_fg(f, g, surj.section(surj.proj[x]), x, t[surj.proj[x]]) for x in surj.total}


def compatibility_defect(f: GerbeMorphism, g: GerbeMorphism, theta_hat: Mapping[Point, float]) -> float:
    surj = f.source.surj
    worst = 0.0
    for x1, x2 in surj.tuples(2):
        worst = max(worst, angles.dist(phi_fg(f, g, x1, x2, theta_hat[x1]) - theta_hat[x2]))
    return worst


def descend_section(
    f: GerbeMorphism, g: GerbeMorphism, theta_hat: Mapping[Point, float], tol: Optional[float] = None
) -> Transformation:
    tol = get_settings().tol if tol is None else tol
    surj = f.source.surj
    for x1, x2 in surj.tuples(2):
        defect = angles.dist(phi_fg(f, g, x1, x2, theta_hat[x1]) - theta_hat[x2])
        if defect > tol:
            raise NotDescendable(
                "section is not compatible with the transport",
                {"pair": join_key((x1, x2)), "defect": defect},
            )
    return Transformation(f, g, {m: theta_hat[surj.section(m)] for m in surj.base})


def pointwise_product(t1: Transformation, t2: Transformation) -> Dict[Point, float]:
    """x ↦ θ̂₁(x) · θ̂₂(x) in Q_(f x, h x)."""
    f, g, h = t1.source, t1.target, t2.target
    Q = f.target
    lift1, lift2 = lift_section(t1), lift_section(t2)
    return {x: Q.multiply(f(x), g(x), h(x), lift1[x], lift2[x]) for x in f.source.surj.total}


def vcompose(t1: Transformation, t2: Transformation) -> Transformation:
    """t2 ∘ t1 for t1: f ⇒ g and t2: g ⇒ h."""
    if not t1.target.same_as(t2.source):
        raise NotComposable("middle morphisms differ", {})
    f, g, h = t1.source, t1.target, t2.target
    surj, Q = f.source.surj, f.target
    theta = {}
    for m in surj.base:
        s = surj.section(m)
        theta[m] = Q.multiply(f(s), g(s), h(s), t1[m], t2[m])
    return Transformation(f, h, theta)


def hcompose(theta: Transformation, lam: Transformation, tol: Optional[float] = None) -> Transformation:
    """Horizontal composite g₁∘f₁ ⇒ g₂∘f₂ of θ: f₁ ⇒ f₂ and λ: g₁ ⇒ g₂."""
    f1, f2 = theta.source, theta.target
    g1, g2 = lam.source, lam.target
    if f1.target is not g1.source:
        raise NotComposable("transformations are not horizontally composable", {})
    R = g1.target
    theta_hat = lift_section(theta)
    lam_hat = lift_section(lam)
    hat = {}
    for x in f1.source.surj.total:
        y1, y2 = f1(x), f2(x)
        transported = g2.apply(y1, y2, theta_hat[x])
        hat[x] = R.multiply(g1(y1), g2(y1), g2(y2), lam_hat[y1], transported)
    return descend_section(compose_morphisms(g1, f1), compose_morphisms(g2, f2), hat, tol)


def interchange_defect(
    theta12: Transformation, theta23: Transformation, lam12: Transformation, lam23: Transformation
) -> float:
    """(λ₂₃λ₁₂)∘(θ₂₃θ₁₂) against (λ₂₃∘θ₂₃)(λ₁₂∘θ₁₂)."""
    lhs = hcompose(vcompose(theta12, theta23), vcompose(lam12, lam23))
    rhs = vcompose(hcompose(theta12, lam12), hcompose(theta23, lam23))
    return max(angles.dist(lhs[m] - rhs[m]) for m in lhs.theta)


def transport_cocycle_defect(f: GerbeMorphism, g: GerbeMorphism, v: float = 0.3) -> float:
    """Largest defect of φ₂₃ ∘ φ₁₂ = φ₁₃ over fiber triples."""
    worst = 0.0
    for x1, x2, x3 in f.source.surj.tuples(3):
        two_steps = phi_fg(f, g, x2, x3, phi_fg(f, g, x1, x2, v))
        worst = max(worst, angles.dist(two_steps - phi_fg(f, g, x1, x3, v)))
    return worst

