"""Finite torsor models of bundle gerbes.

Every torsor fiber ``P_(x1,x2)`` carries a chosen trivialization, so an element
is an angle. The product of ``a ∈ P_(x1,x2)`` and ``b ∈ P_(x2,x3)`` is
``a + b + c(x1, x2, x3)`` in ``P_(x1,x3)``; the phase cocycle ``c`` is
normalized so the element of phase 0 over the diagonal is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Tuple

from celery.utils.log import get_logger

from common import angles
from common.config import get_settings
from common.errors import (
    NotAssociative,
    NotCompatible,
    NotComposable,
    NotNormalized,
    NotOverIdentity,
    NotSameFiber,
    SchemaError,
    ValidationFailure,
)
from common.models import GerbeSchema, MorphismSchema, join_key, split_key

logger = get_logger(__name__)

Point = Hashable
Pair = Tuple[Point, Point]
Triple = Tuple[Point, Point, Point]


def sort_ids(ids: Iterable[Point]) -> List[Point]:
    ids = list(ids)
    try:
        return sorted(ids)
    except TypeError:
        return sorted(ids, key=repr)


def _tol(tol: Optional[float]) -> float:
    return get_settings().tol if tol is None else tol


@dataclass(frozen=True, eq=False)
class FinSurjection:
    """proj: X → M between finite sets; every fiber is non-empty."""

    proj: Mapping[Point, Point]
    base: Tuple[Point, ...] = ()

    def __post_init__(self) -> None:
        proj = dict(self.proj)
        base = tuple(sort_ids(set(self.base) | set(proj.values())))
        if not proj:
            raise ValidationFailure("surjection needs a non-empty total space")
        empty = [m for m in base if m not in set(proj.values())]
        if empty:
            raise ValidationFailure("projection is not surjective", {"point": str(empty[0])})
        object.__setattr__(self, "proj", proj)
        object.__setattr__(self, "base", base)

    @cached_property
    def total(self) -> Tuple[Point, ...]:
        return tuple(sort_ids(self.proj))

    @cached_property
    def fibers(self) -> Dict[Point, Tuple[Point, ...]]:
        out: Dict[Point, List[Point]] = {m: [] for m in self.base}
        for x in self.total:
            out[self.proj[x]].append(x)
        return {m: tuple(xs) for m, xs in out.items()}

    def fiber(self, m: Point) -> Tuple[Point, ...]:
        try:
            return self.fibers[m]
        except KeyError:
            raise ValidationFailure("point is not in the base", {"point": str(m)}) from None

    def section(self, m: Point) -> Point:
        """Minimal element of the fiber over m."""
        return self.fiber(m)[0]

    def same_fiber(self, *xs: Point) -> bool:
        return len({self.proj[x] for x in xs}) == 1

    def check_same_fiber(self, *xs: Point) -> Point:
        missing = [x for x in xs if x not in self.proj]
        if missing:
            raise NotSameFiber("point is not in the total space", {"point": str(missing[0])})
        if not self.same_fiber(*xs):
            raise NotSameFiber("points lie over different base points", {"points": [str(x) for x in xs]})
        return self.proj[xs[0]]

    def tuples(self, arity: int) -> Iterator[Tuple[Point, ...]]:
        """All fiberwise tuples (X^[arity]), fiber by fiber."""
        for m in self.base:
            yield from product(self.fiber(m), repeat=arity)

    def restrict(self, base_points: Iterable[Point]) -> "FinSurjection":
        keep = set(base_points)
        return FinSurjection({x: m for x, m in self.proj.items() if m in keep}, tuple(keep))


@dataclass(frozen=True, eq=False)
class FinGerbe:
    surj: FinSurjection
    c: Mapping[Triple, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", {k: angles.wrap(v) for k, v in self.c.items() if angles.wrap(v) != 0.0})

    def phase(self, x1: Point, x2: Point, x3: Point) -> float:
        return self.c.get((x1, x2, x3), 0.0)

    def multiply(self, x1: Point, x2: Point, x3: Point, a: float, b: float) -> float:
        """Phase of (a ∈ P_(x1,x2)) · (b ∈ P_(x2,x3)) in P_(x1,x3)."""
        return angles.add(a, b, self.phase(x1, x2, x3))

    def inverse(self, x1: Point, x2: Point, a: float) -> float:
        """Phase in P_(x2,x1) of the inverse of a ∈ P_(x1,x2)."""
        return angles.add(-a, -self.phase(x1, x2, x1))

    def associativity_defect(self, x1: Point, x2: Point, x3: Point, x4: Point) -> float:
        c = self.phase
        return angles.dist(c(x2, x3, x4) - c(x1, x3, x4) + c(x1, x2, x4) - c(x1, x2, x3))

    def to_json(self) -> dict:
        return {
            "proj": {str(x): str(m) for x, m in self.surj.proj.items()},
            "c": {join_key(k): v for k, v in sorted(self.c.items(), key=lambda kv: join_key(kv[0]))},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FinGerbe":
        schema = GerbeSchema.model_validate(data)
        c = {}
        for key, value in schema.c.items():
            triple = split_key(key)
            if len(triple) != 3:
                raise SchemaError("phase keys must name three points", {"key": key})
            c[triple] = value
        return make_gerbe(FinSurjection(schema.proj), c)


def make_gerbe(surj: FinSurjection, c: Mapping[Triple, float], tol: Optional[float] = None) -> FinGerbe:
    """Validated gerbe: normalized, fiberwise and associative."""
    tol = _tol(tol)
    for key in c:
        if len(key) != 3:
            raise SchemaError("phase keys must be triples", {"key": str(key)})
        surj.check_same_fiber(*key)
    P = FinGerbe(surj, c)
    for x1, x2 in surj.tuples(2):
        for triple in ((x1, x1, x2), (x1, x2, x2)):
            if angles.dist(P.phase(*triple)) > tol:
                raise NotNormalized("phase is nonzero on a degenerate triple", {"triple": join_key(triple)})
    for quad in surj.tuples(4):
        defect = P.associativity_defect(*quad)
        if defect > tol:
            raise NotAssociative("phase cocycle fails on a quadruple", {"quadruple": join_key(quad), "defect": defect})
    return P


def restrict_gerbe(P: FinGerbe, base_points: Iterable[Point]) -> FinGerbe:
    surj = P.surj.restrict(base_points)
    return FinGerbe(surj, {k: v for k, v in P.c.items() if k[0] in surj.proj})


def contract(surj: FinSurjection, theta: Callable[[Point, Point, Point], float]) -> Dict[Pair, float]:
    """Fiber primitive b(x1, x2) = θ(x0, x1, x2) with x0 the fiber minimum.

    For a normalized fiber 2-cocycle θ this satisfies
    b(x2,x3) − b(x1,x3) + b(x1,x2) = θ(x1,x2,x3).
    """
    out = {}
    for x1, x2 in surj.tuples(2):
        x0 = surj.section(surj.proj[x1])
        out[(x1, x2)] = angles.wrap(theta(x0, x1, x2))
    return out


def fiber_coboundary(b: Callable[[Point, Point], float]) -> Callable[[Point, Point, Point], float]:
    return lambda x1, x2, x3: b(x2, x3) - b(x1, x3) + b(x1, x2)


@dataclass(frozen=True, eq=False)
class GerbeMorphism:
    """f = (f̂, f) over id_M; ``lam`` is the phase of f̂ on the canonical elements."""

    source: FinGerbe
    target: FinGerbe
    f: Mapping[Point, Point]
    lam: Mapping[Pair, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", dict(self.f))
        object.__setattr__(self, "lam", {k: angles.wrap(v) for k, v in self.lam.items() if angles.wrap(v) != 0.0})

    def __call__(self, x: Point) -> Point:
        return self.f[x]

    def phase(self, x1: Point, x2: Point) -> float:
        return self.lam.get((x1, x2), 0.0)

    def apply(self, x1: Point, x2: Point, a: float) -> float:
        """Phase of f̂(a) in Q_(f x1, f x2) for a ∈ P_(x1,x2)."""
        return angles.add(a, self.phase(x1, x2))

    def law_defect(self, x1: Point, x2: Point, x3: Point) -> float:
        f, lam = self.f, self.phase
        lhs = lam(x2, x3) + lam(x1, x2) + self.target.phase(f[x1], f[x2], f[x3])
        rhs = lam(x1, x3) + self.source.phase(x1, x2, x3)
        return angles.dist(lhs - rhs)

    def same_ends(self, other: "GerbeMorphism") -> bool:
        return self.source is other.source and self.target is other.target

    def same_as(self, other: "GerbeMorphism") -> bool:
        return self is other or (self.same_ends(other) and self.f == other.f and self.lam == other.lam)

    def to_json(self) -> dict:
        return {
            "f": {str(x): str(y) for x, y in self.f.items()},
            "lam": {join_key(k): v for k, v in sorted(self.lam.items(), key=lambda kv: join_key(kv[0]))},
        }

    @classmethod
    def from_json(cls, P: FinGerbe, Q: FinGerbe, data: Mapping) -> "GerbeMorphism":
        schema = MorphismSchema.model_validate(data)
        lam = {}
        for key, value in schema.lam.items():
            pair = split_key(key)
            if len(pair) != 2:
                raise SchemaError("morphism phase keys must name two points", {"key": key})
            lam[pair] = value
        return make_morphism(P, Q, schema.f, lam)


def make_morphism(
    P: FinGerbe, Q: FinGerbe, f: Mapping[Point, Point], lam: Mapping[Pair, float], tol: Optional[float] = None
) -> GerbeMorphism:
    tol = _tol(tol)
    if set(P.surj.base) != set(Q.surj.base):
        raise NotOverIdentity("gerbes live over different bases", {})
    for x in P.surj.total:
        if x not in f:
            raise SchemaError("map is not defined on every point", {"point": str(x)})
        if f[x] not in Q.surj.proj or Q.surj.proj[f[x]] != P.surj.proj[x]:
            raise NotOverIdentity("map does not cover the identity of the base", {"point": str(x)})
    for key in lam:
        P.surj.check_same_fiber(*key)
    morphism = GerbeMorphism(P, Q, f, lam)
    for triple in P.surj.tuples(3):
        defect = morphism.law_defect(*triple)
        if defect > tol:
            raise NotCompatible(
                "morphism does not respect products", {"triple": join_key(triple), "defect": defect}
            )
    return morphism


def identity_morphism(P: FinGerbe) -> GerbeMorphism:
    return GerbeMorphism(P, P, {x: x for x in P.surj.total}, {})


def compose_morphisms(g: GerbeMorphism, f: GerbeMorphism) -> GerbeMorphism:
    """g ∘ f: map x ↦ g(f(x)), phase λ_f(x1,x2) + λ_g(f x1, f x2)."""
    if f.target is not g.source:
        raise NotComposable("target of the first morphism is not the source of the second", {})
    lam = {
        (x1, x2): f.phase(x1, x2) + g.phase(f(x1), f(x2))
        for x1, x2 in f.source.surj.tuples(2)
    }
    return GerbeMorphism(f.source, g.target, {x: g(f(x)) for x in f.source.surj.total}, lam)


def gerbe_isomorphism(P: FinGerbe, Q: FinGerbe) -> GerbeMorphism:
    """Isomorphism P → Q over the identity of a common surjection."""
    if P.surj.proj != Q.surj.proj:
        raise NotOverIdentity("gerbes are defined on different surjections", {})
    lam = contract(P.surj, lambda a, b, c: P.phase(a, b, c) - Q.phase(a, b, c))
    return make_morphism(P, Q, {x: x for x in P.surj.total}, lam)


@dataclass(frozen=True, eq=False)
class GroupoidTable:
    """The groupoid of a gerbe over one base point."""

    gerbe: FinGerbe
    point: Point

    @property
    def objects(self) -> Tuple[Point, ...]:
        return self.gerbe.surj.fiber(self.point)

    def compose(self, x1: Point, x2: Point, x3: Point, a: float, b: float) -> float:
        return self.gerbe.multiply(x1, x2, x3, a, b)

    def identity(self, x: Point) -> float:
        return 0.0

    def inverse(self, x1: Point, x2: Point, a: float) -> float:
        return self.gerbe.inverse(x1, x2, a)

    def check(self, samples: Iterable[float] = (0.0, 0.25, 0.6180339887)) -> float:
        """Largest defect among identity, associativity and inverse laws."""
        samples = list(samples)
        worst = 0.0
        objs = self.objects
        for x1, x2 in product(objs, repeat=2):
            for a in samples:
                worst = max(
                    worst,
                    angles.dist(self.compose(x1, x1, x2, self.identity(x1), a) - a),
                    angles.dist(self.compose(x1, x2, x2, a, self.identity(x2)) - a),
                    angles.dist(self.compose(x1, x2, x1, a, self.inverse(x1, x2, a))),
                    angles.dist(self.compose(x2, x1, x2, self.inverse(x1, x2, a), a)),
                )
        for x1, x2, x3, x4 in product(objs, repeat=4):
            a, b, c = samples[0], samples[1 % len(samples)], samples[-1]
            left = self.compose(x1, x3, x4, self.compose(x1, x2, x3, a, b), c)
            right = self.compose(x1, x2, x4, a, self.compose(x2, x3, x4, b, c))
            worst = max(worst, angles.dist(left - right))
        return worst


def groupoid_at(P: FinGerbe, m: Point) -> GroupoidTable:
    P.surj.fiber(m)
    return GroupoidTable(P, m)
