"""Finite bundle 2-gerbes (Q, Y, X, M).

Points y of Y lie over fiberwise pairs (x1, x2) of X → M and Q is a finite
gerbe on Y → X^[2] with phase cocycle ``c``. The product
``m(y23, y12) = y13`` composes a point over (x2, x3) after one over
(x1, x2); ``m_hat`` is the phase of the product morphism on pairs of
composable pairs and ``a_hat(y34, y23, y12)`` the lifted associator in
Q over (m(m(y34, y23), y12), m(y34, m(y23, y12))).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from celery.utils.log import get_logger

from common import angles
from common.config import get_settings
from common.errors import SchemaError, ValidationFailure
from common.models import CheckReport, TwoGerbeSchema, join_key, split_key
from gerbes.finite import FinGerbe, FinSurjection, Point

logger = get_logger(__name__)

YPair = Tuple[Point, Point]
YTriple = Tuple[Point, Point, Point]
YQuad = Tuple[Point, Point, Point, Point]

COHERENCE_SIGNS = (1, -1, 1, -1, 1)


@dataclass(frozen=True, eq=False)
class Fin2Gerbe:
    surj: FinSurjection
    y: Mapping[Point, Tuple[Point, Point]]
    m: Mapping[YPair, Point]
    c: Mapping[YTriple, float] = field(default_factory=dict)
    m_hat: Mapping[YQuad, float] = field(default_factory=dict)
    a_hat: Mapping[YTriple, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "y", {k: tuple(v) for k, v in self.y.items()})
        object.__setattr__(self, "m", dict(self.m))
        object.__setattr__(self, "c", {k: angles.wrap(v) for k, v in self.c.items()})
        object.__setattr__(self, "m_hat", {k: angles.wrap(v) for k, v in self.m_hat.items()})
        object.__setattr__(self, "a_hat", {k: angles.wrap(v) for k, v in self.a_hat.items()})

    @cached_property
    def x_pairs(self) -> Tuple[Tuple[Point, Point], ...]:
        return tuple(self.surj.tuples(2))

    @cached_property
    def y_surj(self) -> FinSurjection:
        """Y → X^[2]; raises when some fiber pair has no point above it."""
        return FinSurjection(self.y, self.x_pairs)

    @cached_property
    def q(self) -> FinGerbe:
        return FinGerbe(self.y_surj, self.c)

    def fiber(self, x1: Point, x2: Point) -> Tuple[Point, ...]:
        return self.y_surj.fiber((x1, x2))

    def phase(self, a: Point, b: Point, c: Point) -> float:
        return self.c.get((a, b, c), 0.0)

    def mul(self, later: Point, earlier: Point) -> Point:
        return self.m[(later, earlier)]

    def lam(self, pair: YPair, other: YPair) -> float:
        return self.m_hat.get(pair + other, 0.0)

    def assoc(self, w: YTriple) -> float:
        return self.a_hat.get(w, 0.0)

    def m1(self, w: YTriple) -> Point:
        """(y34 y23) y12."""
        return self.mul(self.mul(w[0], w[1]), w[2])

    def m2(self, w: YTriple) -> Point:
        """y34 (y23 y12)."""
        return self.mul(w[0], self.mul(w[1], w[2]))

    def lam_m1(self, w: YTriple, v: YTriple) -> float:
        return self.lam((w[0], w[1]), (v[0], v[1])) + self.lam(
            (self.mul(w[0], w[1]), w[2]), (self.mul(v[0], v[1]), v[2])
        )

    def lam_m2(self, w: YTriple, v: YTriple) -> float:
        return self.lam((w[1], w[2]), (v[1], v[2])) + self.lam(
            (w[0], self.mul(w[1], w[2])), (v[0], self.mul(v[1], v[2]))
        )

    def x_tuples(self, arity: int) -> Iterator[Tuple[Point, ...]]:
        return self.surj.tuples(arity)

    def composable(self, xs: Sequence[Point]) -> Iterator[Tuple[Point, ...]]:
        """Y-tuples (latest first) over the consecutive pairs of ``xs``."""
        fibers = [self.fiber(xs[i], xs[i + 1]) for i in reversed(range(len(xs) - 1))]
        return product(*fibers)

    def to_json(self) -> Dict[str, Any]:
        def keyed(data: Mapping) -> Dict[str, float]:
            return {join_key(k): v for k, v in sorted(data.items(), key=lambda kv: join_key(kv[0])) if v}

        return {
            "proj": {str(x): str(m) for x, m in self.surj.proj.items()},
            "y": {str(k): [str(a), str(b)] for k, (a, b) in self.y.items()},
            "c": keyed(self.c),
            "m": {join_key(k): str(v) for k, v in self.m.items()},
            "m_hat": keyed(self.m_hat),
            "a_hat": keyed(self.a_hat),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Fin2Gerbe":
        schema = TwoGerbeSchema.model_validate(data)

        def parse(values: Mapping[str, Any], arity: int, name: str) -> Dict[Tuple[str, ...], Any]:
            out = {}
            for key, value in values.items():
                parts = split_key(key)
                if len(parts) != arity:
                    raise SchemaError(f"{name} keys must name {arity} points", {"key": key})
                out[parts] = value
            return out

        for key, ends in schema.y.items():
            if len(ends) != 2:
                raise SchemaError("each point of Y lies over a pair of X", {"point": key})
        return cls(
            FinSurjection(schema.proj),
            {k: tuple(v) for k, v in schema.y.items()},
            parse(schema.m, 2, "m"),
            parse(schema.c, 3, "c"),
            parse(schema.m_hat, 4, "m_hat"),
            parse(schema.a_hat, 3, "a_hat"),
        )


def _check_structure(g: Fin2Gerbe) -> Optional[Dict[str, Any]]:
    try:
        g.y_surj
    except ValidationFailure as exc:
        return {"reason": "a fiber pair of X has no point of Y above it", **exc.witness}
    for y, (x1, x2) in g.y.items():
        if (x1, x2) not in set(g.x_pairs):
            return {"point": str(y), "reason": "point lies over a pair outside X^[2]"}
    for x1, x2, x3 in g.x_tuples(3):
        for later, earlier in g.composable((x1, x2, x3)):
            out = g.m.get((later, earlier))
            if out is None:
                return {"pair": join_key((later, earlier)), "reason": "product undefined"}
            if g.y.get(out) != (x1, x3):
                return {"pair": join_key((later, earlier)), "reason": "product lies over the wrong pair"}
    return None


def product_law_defect(g: Fin2Gerbe, a: YPair, b: YPair, c: YPair) -> float:
    """m̂ respects products over three composable pairs on one X-triple."""
    lhs = g.lam(b, c) + g.lam(a, b) + g.phase(g.mul(*a), g.mul(*b), g.mul(*c))
    rhs = g.lam(a, c) + g.phase(a[0], b[0], c[0]) + g.phase(a[1], b[1], c[1])
    return angles.dist(lhs - rhs)


def transport_assoc(g: Fin2Gerbe, w: YTriple, v: YTriple, value: float) -> float:
    """Move a phase of Q(m1 w, m2 w) to Q(m1 v, m2 v) along the triple product."""
    source_phase = g.phase(w[0], v[0], w[0]) + g.phase(w[1], v[1], w[1]) + g.phase(w[2], v[2], w[2])
    f_w, f_v, g_w, g_v = g.m1(w), g.m1(v), g.m2(w), g.m2(v)
    return angles.add(
        value,
        g.lam_m1(v, w),
        -source_phase,
        g.phase(f_v, f_w, g_w),
        g.lam_m2(w, v),
        g.phase(f_v, g_w, g_v),
    )


def coherence_terms(g: Fin2Gerbe, quad: YQuad) -> Tuple[List[float], float]:
    """The five associator values on (d, c, b, a), listed by omitted X-point, and the remainder."""
    d, c, b, a = quad
    dc, cb, ba = g.mul(d, c), g.mul(c, b), g.mul(b, a)
    dc_b, d_cb, cb_a, c_ba = g.mul(dc, b), g.mul(d, cb), g.mul(cb, a), g.mul(c, ba)
    p1 = g.mul(dc_b, a)
    p2 = g.mul(dc, ba)
    p3 = g.mul(d, c_ba)
    p4 = g.mul(d_cb, a)
    p5 = g.mul(d, cb_a)
    terms = [
        g.assoc((d, c, b)),
        g.assoc((d, c, ba)),
        g.assoc((d, cb, a)),
        g.assoc((dc, b, a)),
        g.assoc((c, b, a)),
    ]
    rest = (
        g.lam((dc_b, a), (d_cb, a))
        + g.lam((d, cb_a), (d, c_ba))
        + g.phase(p1, p4, p5)
        + g.phase(p1, p5, p3)
        - g.phase(p1, p2, p3)
    )
    return terms, rest


def coherence_defects(g: Fin2Gerbe, signs: Sequence[int] = COHERENCE_SIGNS) -> Iterator[Tuple[YQuad, float]]:
    """Five-term associator coherence on every composable Y-quadruple."""
    for xs in g.x_tuples(5):
        for quad in g.composable(xs):
            terms, rest = coherence_terms(g, quad)
            yield quad, angles.dist(sum(s * t for s, t in zip(signs, terms)) + rest)


def validate_2gerbe(g: Fin2Gerbe, tol: Optional[float] = None, signs: Sequence[int] = COHERENCE_SIGNS) -> CheckReport:
    """Check the axioms of a finite 2-gerbe; never raises."""
    tol = get_settings().tol if tol is None else tol
    report = CheckReport(tol=tol)
    witness = _check_structure(g)
    if witness is not None:
        report.fail("structure", witness)
        return report
    report.record("structure", 0.0)

    report.record("gerbe", 0.0)
    Q = g.q
    for y1, y2 in g.y_surj.tuples(2):
        for t in ((y1, y1, y2), (y1, y2, y2)):
            report.record("gerbe", angles.dist(Q.phase(*t)), {"triple": join_key(t)})
    for quad in g.y_surj.tuples(4):
        report.record("gerbe", Q.associativity_defect(*quad), {"quadruple": join_key(quad)})

    report.record("product", 0.0)
    for xs in g.x_tuples(3):
        pairs = list(g.composable(xs))
        for a, b, c in product(pairs, repeat=3):
            report.record("product", product_law_defect(g, a, b, c), {"pairs": join_key(a + b + c)})

    report.record("associator_descent", 0.0)
    for xs in g.x_tuples(4):
        triples = list(g.composable(xs))
        for w, v in product(triples, repeat=2):
            defect = angles.dist(transport_assoc(g, w, v, g.assoc(w)) - g.assoc(v))
            report.record("associator_descent", defect, {"triples": join_key(w + v)})

    report.record("coherence", 0.0)
    for quad, defect in coherence_defects(g, signs):
        report.record("coherence", defect, {"quadruple": join_key(quad)})
    if not report.passed:
        logger.info("2-gerbe fails: %s", {n: e.max_defect for n, e in report.entries.items() if not e.passed})
    return report


def twist_associator(g: Fin2Gerbe, kappa: Mapping[Tuple[Point, Point, Point, Point], float]) -> Fin2Gerbe:
    """Add an X-quadruple phase to every associator value above it."""
    a_hat = dict(g.a_hat)
    for xs in g.x_tuples(4):
        shift = kappa.get(xs, 0.0)
        if not shift:
            continue
        for w in g.composable(xs):
            a_hat[w] = a_hat.get(w, 0.0) + shift
    return Fin2Gerbe(g.surj, g.y, g.m, g.c, g.m_hat, a_hat)
