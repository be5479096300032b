"""Two-descent data over a finite cover and the glued gerbe.

A datum consists of gerbes Q_i over the sets U_i of a cover of M, morphisms
φ_ij: Q_i|U_ij → Q_j|U_ij and transformations ψ_ijk: φ_jk∘φ_ij ⇒ φ_ik,
stored at the lifted level as ψ̂_ijk(x) ∈ Q_k(φ_jk φ_ij x, φ_ik x) for x in
X_i over U_ijk. All ordered pairs and triples with non-empty overlap are
carried; φ_ii is the identity and ψ̂_iik = ψ̂_ikk = 0.

The glued gerbe lives on X = ⊔ X_i with ids ``"i:x"``; its fiber over
((i, x_i), (j, x_j)) is Q_j at (φ_ij x_i, x_j).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

from celery.utils.log import get_logger

from common import angles
from common.config import get_settings
from common.errors import CocycleFails, NumericDefectExceeded, SchemaError
from common.models import CheckReport, TwoDescentSchema, join_key, split_int_key, split_key
from gerbes.finite import (
    FinGerbe,
    FinSurjection,
    GerbeMorphism,
    Pair,
    Point,
    compose_morphisms,
    make_gerbe,
    make_morphism,
    restrict_gerbe,
    sort_ids,
)
from gerbes.twocat import Transformation, compatibility_defect

logger = get_logger(__name__)

Index2 = Tuple[int, int]
Index3 = Tuple[int, int, int]


def glued_id(i: int, x: Point) -> str:
    return f"{i}:{x}"


def split_glued_id(label: str) -> Tuple[int, str]:
    index, _, point = label.partition(":")
    return int(index), point


@dataclass(frozen=True, eq=False)
class TwoDescentData:
    cover: Tuple[FrozenSet[Point], ...]
    gerbes: Tuple[FinGerbe, ...]
    maps: Mapping[Index2, Mapping[Point, Point]] = field(default_factory=dict)
    lams: Mapping[Index2, Mapping[Pair, float]] = field(default_factory=dict)
    psi: Mapping[Index3, Mapping[Point, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cover", tuple(frozenset(u) for u in self.cover))
        object.__setattr__(self, "gerbes", tuple(self.gerbes))
        if not self.cover or len(self.cover) != len(self.gerbes):
            raise SchemaError("cover and gerbe list must be non-empty and of equal length", {})
        object.__setattr__(self, "_restricted", {})
        object.__setattr__(self, "_morphisms", {})

    @property
    def size(self) -> int:
        return len(self.cover)

    @cached_property
    def base(self) -> Tuple[Point, ...]:
        return tuple(sort_ids(set().union(*self.cover)))

    def overlap(self, *indices: int) -> FrozenSet[Point]:
        return frozenset.intersection(*(self.cover[i] for i in indices))

    def points(self, i: int, subset: FrozenSet[Point]) -> List[Point]:
        surj = self.gerbes[i].surj
        return [x for x in surj.total if surj.proj[x] in subset]

    def pairs(self) -> List[Index2]:
        return [(i, j) for i, j in product(range(self.size), repeat=2) if self.overlap(i, j)]

    def triples(self) -> List[Index3]:
        return [t for t in product(range(self.size), repeat=3) if self.overlap(*t)]

    def quadruples(self) -> List[Tuple[int, int, int, int]]:
        return [q for q in product(range(self.size), repeat=4) if self.overlap(*q)]

    def phi(self, i: int, j: int, x: Point) -> Point:
        if i == j and (i, j) not in self.maps:
            return x
        return self.maps[(i, j)][x]

    def lam(self, i: int, j: int, x1: Point, x2: Point) -> float:
        return self.lams.get((i, j), {}).get((x1, x2), 0.0)

    def psi_at(self, i: int, j: int, k: int, x: Point) -> float:
        return self.psi.get((i, j, k), {}).get(x, 0.0)

    def restricted(self, i: int, subset: FrozenSet[Point]) -> FinGerbe:
        """Q_i|subset, one shared object per (i, subset)."""
        key = (i, subset)
        if key not in self._restricted:
            self._restricted[key] = restrict_gerbe(self.gerbes[i], subset)
        return self._restricted[key]

    def morphism(self, i: int, j: int, subset: FrozenSet[Point]) -> GerbeMorphism:
        """φ_ij restricted to ``subset`` ⊂ U_ij."""
        key = (i, j, subset)
        if key not in self._morphisms:
            source, target = self.restricted(i, subset), self.restricted(j, subset)
            xs = source.surj.total
            self._morphisms[key] = GerbeMorphism(
                source,
                target,
                {x: self.phi(i, j, x) for x in xs},
                {(x1, x2): self.lam(i, j, x1, x2) for x1, x2 in source.surj.tuples(2)},
            )
        return self._morphisms[key]

    def to_json(self) -> Dict[str, Any]:
        return {
            "cover": [[str(m) for m in sort_ids(u)] for u in self.cover],
            "gerbes": [Q.to_json() for Q in self.gerbes],
            "phi": {
                join_key(ij): {
                    "f": {str(x): str(y) for x, y in self.maps.get(ij, {}).items()},
                    "lam": {join_key(k): v for k, v in self.lams.get(ij, {}).items() if v},
                }
                for ij in sorted(set(self.maps) | set(self.lams))
            },
            "psi": {
                join_key(ijk): {str(x): v for x, v in values.items() if v}
                for ijk, values in sorted(self.psi.items())
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TwoDescentData":
        schema = TwoDescentSchema.model_validate(data)
        gerbes = [FinGerbe.from_json(g.model_dump()) for g in schema.gerbes]
        maps: Dict[Index2, Dict[Point, Point]] = {}
        lams: Dict[Index2, Dict[Pair, float]] = {}
        for key, morphism in schema.phi.items():
            ij = split_int_key(key)
            if len(ij) != 2:
                raise SchemaError("morphism keys must name two cover indices", {"key": key})
            maps[ij] = dict(morphism.f)
            lams[ij] = {}
            for pair_key, value in morphism.lam.items():
                pair = split_key(pair_key)
                if len(pair) != 2:
                    raise SchemaError("morphism phase keys must name two points", {"key": pair_key})
                lams[ij][pair] = value
        psi: Dict[Index3, Dict[Point, float]] = {}
        for key, values in schema.psi.items():
            ijk = split_int_key(key)
            if len(ijk) != 3:
                raise SchemaError("transformation keys must name three cover indices", {"key": key})
            psi[ijk] = dict(values)
        return cls(tuple(frozenset(u) for u in schema.cover), tuple(gerbes), maps, lams, psi)


def _check_structure(d: TwoDescentData) -> Optional[Dict[str, Any]]:
    """Witness of the first missing or misplaced datum, or None."""
    for i, (U, Q) in enumerate(zip(d.cover, d.gerbes)):
        if set(Q.surj.base) != set(U):
            return {"index": i, "reason": "gerbe base differs from its cover set"}
    for i, j in d.pairs():
        U = d.overlap(i, j)
        target = d.gerbes[j].surj.proj
        for x in d.points(i, U):
            try:
                y = d.phi(i, j, x)
            except KeyError:
                return {"pair": join_key((i, j)), "point": str(x), "reason": "map undefined"}
            if target.get(y) != d.gerbes[i].surj.proj[x]:
                return {"pair": join_key((i, j)), "point": str(x), "reason": "map does not cover the identity"}
    return None


def validate_2descent(d: TwoDescentData, tol: Optional[float] = None) -> CheckReport:
    """Check every invariant of a 2-descent datum; never raises."""
    tol = get_settings().tol if tol is None else tol
    report = CheckReport(tol=tol)
    witness = _check_structure(d)
    if witness is not None:
        report.fail("structure", witness)
        return report
    report.record("structure", 0.0)

    for i, Q in enumerate(d.gerbes):
        report.record("gerbes", 0.0)
        for quad in Q.surj.tuples(4):
            report.record("gerbes", Q.associativity_defect(*quad), {"index": i, "quadruple": join_key(quad)})

    report.record("normalization", 0.0)
    for i in range(d.size):
        for x in d.points(i, d.cover[i]):
            if d.phi(i, i, x) != x:
                report.fail("normalization", {"pair": join_key((i, i)), "point": str(x)})
                break
        for value in d.lams.get((i, i), {}).values():
            report.record("normalization", angles.dist(value), {"pair": join_key((i, i))})
    for i, j, k in d.triples():
        if i == j or j == k:
            for x, value in d.psi.get((i, j, k), {}).items():
                report.record("normalization", angles.dist(value), {"triple": join_key((i, j, k)), "point": str(x)})

    report.record("morphisms", 0.0)
    for i, j in d.pairs():
        f = d.morphism(i, j, d.overlap(i, j))
        for triple in f.source.surj.tuples(3):
            report.record("morphisms", f.law_defect(*triple), {"pair": join_key((i, j)), "triple": join_key(triple)})

    report.record("psi_compatibility", 0.0)
    for i, j, k in d.triples():
        U = d.overlap(i, j, k)
        composite = compose_morphisms(d.morphism(j, k, U), d.morphism(i, j, U))
        hat = {x: d.psi_at(i, j, k, x) for x in d.points(i, U)}
        defect = compatibility_defect(composite, d.morphism(i, k, U), hat)
        report.record("psi_compatibility", defect, {"triple": join_key((i, j, k))})

    report.record("two_cocycle", 0.0)
    for i, j, k, l in d.quadruples():
        for x in d.points(i, d.overlap(i, j, k, l)):
            defect = two_cocycle_defect(d, i, j, k, l, x)
            report.record("two_cocycle", defect, {"quadruple": join_key((i, j, k, l)), "point": str(x)})
    if not report.passed:
        logger.info("2-descent datum fails: %s", {n: e.max_defect for n, e in report.entries.items() if not e.passed})
    return report


def two_cocycle_defect(d: TwoDescentData, i: int, j: int, k: int, l: int, x: Point) -> float:
    """ψ̂_ikl(x)·φ̂_kl(ψ̂_ijk(x)) against ψ̂_ijl(x)·ψ̂_jkl(φ_ij x) in Q_l."""
    c_l = d.gerbes[l].phase
    y = d.phi(i, j, x)
    a = d.phi(k, l, d.phi(j, k, y))
    b = d.phi(k, l, d.phi(i, k, x))
    c = d.phi(i, l, x)
    e = d.phi(j, l, y)
    lhs = d.psi_at(i, j, k, x) + d.lam(k, l, d.phi(j, k, y), d.phi(i, k, x)) + d.psi_at(i, k, l, x) + c_l(a, b, c)
    rhs = d.psi_at(j, k, l, y) + d.psi_at(i, j, l, x) + c_l(a, e, c)
    return angles.dist(lhs - rhs)


@dataclass(frozen=True, eq=False)
class GluedGerbe:
    gerbe: FinGerbe
    chi: Tuple[GerbeMorphism, ...]
    xi: Dict[Index2, Transformation]
    xi_defect: float

    def to_json(self) -> Dict[str, Any]:
        return {
            "gerbe": self.gerbe.to_json(),
            "chi": [f.to_json() for f in self.chi],
            "xi": {join_key(ij): t.to_json() for ij, t in sorted(self.xi.items())},
            "xi_defect": self.xi_defect,
        }


def glued_phase(d: TwoDescentData, a: Tuple[int, Point], b: Tuple[int, Point], c: Tuple[int, Point]) -> float:
    """Phase of the glued product over ((i,x_i), (j,x_j), (k,x_k))."""
    (i, xi), (j, xj), (k, xk) = a, b, c
    c_k = d.gerbes[k].phase
    y = d.phi(i, j, xi)
    z = d.phi(j, k, y)
    w = d.phi(i, k, xi)
    p = d.phi(j, k, xj)
    return angles.add(
        d.lam(j, k, y, xj),
        -d.psi_at(i, j, k, xi),
        -c_k(z, w, z),
        c_k(w, z, p),
        c_k(w, p, xk),
    )


def _chi_phase(d: TwoDescentData, i: int, a: Tuple[int, Point], b: Tuple[int, Point]) -> float:
    (j, xj), (jj, xjj) = a, b
    c_i = d.gerbes[i].phase
    moved = d.phi(j, jj, xj)
    A = d.phi(jj, i, moved)
    B = d.phi(jj, i, xjj)
    C = d.phi(j, i, xj)
    return angles.add(d.lam(jj, i, moved, xjj), -d.psi_at(j, jj, i, xj), -c_i(A, C, A), c_i(C, A, B))


def xi_compatibility(glued: GluedGerbe) -> float:
    return glued.xi_defect


def glue_2descent(d: TwoDescentData, tol: Optional[float] = None) -> GluedGerbe:
    """Glue a validated datum into a gerbe on M with morphisms χ_i: G|U_i → Q_i."""
    tol = get_settings().tol if tol is None else tol
    report = validate_2descent(d, tol)
    if not report.passed:
        failed = sorted(name for name, entry in report.entries.items() if not entry.passed)
        first = report.entries[failed[0]]
        raise CocycleFails(
            "2-descent datum fails validation",
            {"failed": failed, "max_defect": first.max_defect, **first.witness},
        )

    labels: Dict[str, Tuple[int, Point]] = {}
    proj: Dict[str, Point] = {}
    for i, Q in enumerate(d.gerbes):
        for x in Q.surj.total:
            label = glued_id(i, x)
            labels[label] = (i, x)
            proj[label] = Q.surj.proj[x]
    surj = FinSurjection(proj, d.base)
    phases = {t: glued_phase(d, *(labels[s] for s in t)) for t in surj.tuples(3)}
    G = make_gerbe(surj, phases, tol)

    chi = []
    for i in range(d.size):
        source = restrict_gerbe(G, d.cover[i])
        xs = source.surj.total
        f = {s: d.phi(labels[s][0], i, labels[s][1]) for s in xs}
        lam = {(s, t): _chi_phase(d, i, labels[s], labels[t]) for s, t in source.surj.tuples(2)}
        chi.append(make_morphism(source, d.gerbes[i], f, lam, tol))

    xi: Dict[Index2, Transformation] = {}
    worst, worst_pair = 0.0, None
    for i, j in d.pairs():
        if i == j:
            continue
        U = d.overlap(i, j)
        G_ij = restrict_gerbe(G, U)
        xs = G_ij.surj.total
        chi_i = GerbeMorphism(G_ij, d.restricted(i, U), {s: chi[i](s) for s in xs},
                              {pair: chi[i].phase(*pair) for pair in G_ij.surj.tuples(2)})
        chi_j = GerbeMorphism(G_ij, d.restricted(j, U), {s: chi[j](s) for s in xs},
                              {pair: chi[j].phase(*pair) for pair in G_ij.surj.tuples(2)})
        source = compose_morphisms(d.morphism(i, j, U), chi_i)
        hat = {s: d.psi_at(labels[s][0], i, j, labels[s][1]) for s in xs}
        defect = compatibility_defect(source, chi_j, hat)
        if defect > worst:
            worst, worst_pair = defect, (i, j)
        xi[(i, j)] = Transformation(source, chi_j, {m: hat[G_ij.surj.section(m)] for m in G_ij.surj.base})
    if worst > tol:
        raise NumericDefectExceeded(
            "glued transformations miss the compatibility with psi",
            {"pair": join_key(worst_pair), "defect": worst, "tol": tol},
        )
    logger.info("Glued %d local gerbes into %d points over %d base points", d.size, len(proj), len(d.base))
    return GluedGerbe(G, tuple(chi), xi, worst)

