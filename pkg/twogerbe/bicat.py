"""Finite C×-bicategories and their coherence checks.

Between any two parallel 1-cells the 2-cells form a circle torsor with a
chosen base point, so a 2-cell is a phase. ``vc`` is the vertical phase
cocycle on parallel triples, ``hc[(g, f, g2, f2)]`` the phase added by
horizontal composition of 2-cells g ⇒ g2 and f ⇒ f2, ``assoc[(h, g, f)]``
the associator in hom((hg)f, h(gf)) and ``left``/``right`` the unitors
1∘f ⇒ f and f∘1 ⇒ f. Composition ``compose[(g, f)]`` applies f first.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product
from typing import Any, Dict, List, Mapping, Optional, Tuple

from common import angles
from common.config import get_settings
from common.errors import SchemaError
from common.models import BicatSchema, CheckReport, join_key, split_key
from gerbes.finite import Point, sort_ids


@dataclass(frozen=True, eq=False)
class Bicat:
    objects: Tuple[Point, ...]
    cells: Mapping[Point, Tuple[Point, Point]]
    compose: Mapping[Tuple[Point, Point], Point]
    vc: Mapping[Tuple[Point, Point, Point], float] = field(default_factory=dict)
    hc: Mapping[Tuple[Point, Point, Point, Point], float] = field(default_factory=dict)
    assoc: Mapping[Tuple[Point, Point, Point], float] = field(default_factory=dict)
    identities: Mapping[Point, Point] = field(default_factory=dict)
    left: Mapping[Point, float] = field(default_factory=dict)
    right: Mapping[Point, float] = field(default_factory=dict)
    synthesized_units: bool = False

    @cached_property
    def homs(self) -> Dict[Tuple[Point, Point], List[Point]]:
        out: Dict[Tuple[Point, Point], List[Point]] = {pair: [] for pair in product(self.objects, repeat=2)}
        for f in sort_ids(self.cells):
            out.setdefault(tuple(self.cells[f]), []).append(f)
        return out

    def hom(self, x: Point, y: Point) -> List[Point]:
        return self.homs.get((x, y), [])

    def v(self, f: Point, g: Point, h: Point) -> float:
        return self.vc.get((f, g, h), 0.0)

    def h(self, g: Point, f: Point, g2: Point, f2: Point) -> float:
        return self.hc.get((g, f, g2, f2), 0.0)

    def a(self, h: Point, g: Point, f: Point) -> float:
        return self.assoc.get((h, g, f), 0.0)

    def c(self, g: Point, f: Point) -> Point:
        return self.compose[(g, f)]

    def chains(self, length: int):
        """Composable chains of 1-cells, latest first, as lists of homs."""
        for xs in product(self.objects, repeat=length + 1):
            homs = [self.hom(xs[i], xs[i + 1]) for i in reversed(range(length))]
            if all(homs):
                yield xs, homs

    def to_json(self) -> Dict[str, Any]:
        def keyed(data: Mapping) -> Dict[str, float]:
            return {join_key(k): float(v) for k, v in data.items() if v}

        return {
            "objects": [str(x) for x in self.objects],
            "cells": {str(f): [str(s), str(t)] for f, (s, t) in self.cells.items()},
            "compose": {join_key(k): str(v) for k, v in self.compose.items()},
            "vc": keyed(self.vc),
            "hc": keyed(self.hc),
            "assoc": keyed(self.assoc),
            "identities": {str(x): str(f) for x, f in self.identities.items()},
            "left": {str(f): float(v) for f, v in self.left.items() if v},
            "right": {str(f): float(v) for f, v in self.right.items() if v},
            "synthesized_units": self.synthesized_units,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Bicat":
        schema = BicatSchema.model_validate(data)

        def parse(values: Mapping[str, Any], arity: int) -> Dict[Tuple[str, ...], Any]:
            out = {}
            for key, value in values.items():
                parts = split_key(key)
                if len(parts) != arity:
                    raise SchemaError(f"keys must name {arity} cells", {"key": key})
                out[parts] = value
            return out

        return cls(
            tuple(schema.objects),
            {f: tuple(ends) for f, ends in schema.cells.items()},
            parse(schema.compose, 2),
            parse(schema.vc, 3),
            parse(schema.hc, 4),
            parse(schema.assoc, 3),
            dict(schema.identities),
            dict(schema.left),
            dict(schema.right),
            schema.synthesized_units,
        )


def _check_structure(b: Bicat) -> Optional[Dict[str, Any]]:
    objects = set(b.objects)
    for f, ends in b.cells.items():
        if len(ends) != 2 or not set(ends) <= objects:
            return {"cell": str(f), "reason": "1-cell ends are not objects"}
    for _, (hg, hf) in b.chains(2):
        for g, f in product(hg, hf):
            out = b.compose.get((g, f))
            if out is None:
                return {"pair": join_key((g, f)), "reason": "composite undefined"}
            if tuple(b.cells.get(out, ())) != (b.cells[f][0], b.cells[g][1]):
                return {"pair": join_key((g, f)), "reason": "composite has the wrong ends"}
    for x, e in b.identities.items():
        if tuple(b.cells.get(e, ())) != (x, x):
            return {"object": str(x), "reason": "identity 1-cell is not an endomorphism"}
    return None


def check_bicat(b: Bicat, tol: Optional[float] = None, invertible_cells: bool = True) -> CheckReport:
    """Check the bicategory axioms on every tuple of cells; never raises.

    ``invertible_cells=False`` skips the search for an inverse of every 1-cell,
    for bicategories exported from a chain of paths.
    """
    tol = get_settings().tol if tol is None else tol
    report = CheckReport(tol=tol)
    witness = _check_structure(b)
    if witness is not None:
        report.fail("structure", witness)
        return report
    report.record("structure", 0.0)

    for name in ("vertical", "two_cell_inverses", "interchange", "associator_naturality", "pentagon"):
        report.record(name, 0.0)
    for cells in b.homs.values():
        for f, g in product(cells, repeat=2):
            for t in ((f, f, g), (f, g, g)):
                report.record("vertical", angles.dist(b.v(*t)), {"cells": join_key(t)})
            report.record("two_cell_inverses", angles.dist(b.v(f, g, f) - b.v(g, f, g)), {"cells": join_key((f, g))})
        for f, g, h, k in product(cells, repeat=4):
            defect = angles.dist(b.v(g, h, k) - b.v(f, h, k) + b.v(f, g, k) - b.v(f, g, h))
            report.record("vertical", defect, {"cells": join_key((f, g, h, k))})

    for _, (hg, hf) in b.chains(2):
        for g, f in product(hg, hf):
            report.record("interchange", angles.dist(b.h(g, f, g, f)), {"cells": join_key((g, f))})
        for g1, g2, g3 in product(hg, repeat=3):
            for f1, f2, f3 in product(hf, repeat=3):
                lhs = b.h(g1, f1, g2, f2) + b.h(g2, f2, g3, f3) + b.v(b.c(g1, f1), b.c(g2, f2), b.c(g3, f3))
                rhs = b.v(g1, g2, g3) + b.v(f1, f2, f3) + b.h(g1, f1, g3, f3)
                report.record("interchange", angles.dist(lhs - rhs), {"cells": join_key((g1, g2, g3, f1, f2, f3))})

    for _, (hh, hg, hf) in b.chains(3):
        for (h1, h2), (g1, g2), (f1, f2) in product(product(hh, repeat=2), product(hg, repeat=2), product(hf, repeat=2)):
            s1, s2 = b.c(b.c(h1, g1), f1), b.c(b.c(h2, g2), f2)
            t1, t2 = b.c(h1, b.c(g1, f1)), b.c(h2, b.c(g2, f2))
            lhs = b.h(h1, g1, h2, g2) + b.h(b.c(h1, g1), f1, b.c(h2, g2), f2) + b.a(h2, g2, f2) + b.v(s1, s2, t2)
            rhs = b.a(h1, g1, f1) + b.h(g1, f1, g2, f2) + b.h(h1, b.c(g1, f1), h2, b.c(g2, f2)) + b.v(s1, t1, t2)
            report.record(
                "associator_naturality",
                angles.dist(lhs - rhs),
                {"cells": join_key((h1, g1, f1, h2, g2, f2))},
            )

    for _, homs in b.chains(4):
        for k, h, g, f in product(*homs):
            report.record("pentagon", pentagon_defect(b, k, h, g, f), pentagon_witness(b, k, h, g, f))

    _check_units(b, report)

    if not invertible_cells:
        report.skip("one_cell_inverses", "1-cells exported without inverses")
        return report
    _check_inverses(b, report)
    return report


def inverse_defect(b: Bicat, f: Point, g: Point) -> float:
    """How far the base 2-cells g∘f ⇒ 1 and f∘g ⇒ 1 are from invertible.

    A missing identity is stood in for by the composite itself.
    """
    x, y = b.cells[f]
    worst = 0.0
    for composite, obj in ((b.c(g, f), x), (b.c(f, g), y)):
        one = b.identities.get(obj, composite)
        worst = max(worst, angles.dist(b.v(composite, one, composite) - b.v(one, composite, one)))
    return worst


def find_inverse(b: Bicat, f: Point) -> Optional[Tuple[Point, float]]:
    """The reverse 1-cell whose composites with ``f`` come back to the identities best.

    Ties go to a g whose composites are the identity 1-cells themselves.
    """
    x, y = b.cells[f]

    def exact(g: Point) -> bool:
        return b.c(g, f) == b.identities.get(x) and b.c(f, g) == b.identities.get(y)

    scored = [(inverse_defect(b, f, g), not exact(g), str(g), g) for g in b.hom(y, x)]
    if not scored:
        return None
    defect, _, _, g = min(scored)
    return g, defect


def _check_inverses(b: Bicat, report: CheckReport) -> None:
    report.record("one_cell_inverses", 0.0)
    for f in sort_ids(b.cells):
        found = find_inverse(b, f)
        if found is None:
            report.fail("one_cell_inverses", {"cell": str(f), "reason": "no 1-cell in the reverse direction"})
            return
        g, defect = found
        report.record("one_cell_inverses", defect, {"cell": str(f), "inverse": str(g)})


def pentagon_defect(b: Bicat, k: Point, h: Point, g: Point, f: Point) -> float:
    kh, hg, gf = b.c(k, h), b.c(h, g), b.c(g, f)
    kh_g, k_hg, hg_f, h_gf = b.c(kh, g), b.c(k, hg), b.c(hg, f), b.c(h, gf)
    p1, p2, p3 = b.c(kh_g, f), b.c(kh, gf), b.c(k, h_gf)
    p4, p5 = b.c(k_hg, f), b.c(k, hg_f)
    upper = b.a(kh, g, f) + b.a(k, h, gf) + b.v(p1, p2, p3)
    lower = (
        b.a(k, h, g) + b.h(kh_g, f, k_hg, f)
        + b.a(k, hg, f)
        + b.a(h, g, f) + b.h(k, hg_f, k, h_gf)
        + b.v(p1, p4, p5) + b.v(p1, p5, p3)
    )
    return angles.dist(lower - upper)


def pentagon_witness(b: Bicat, k: Point, h: Point, g: Point, f: Point) -> Dict[str, Any]:
    """The four composable 1-cells and the five associator components they involve."""
    kh, hg, gf = b.c(k, h), b.c(h, g), b.c(g, f)
    keys = [(kh, g, f), (k, h, gf), (k, h, g), (k, hg, f), (h, g, f)]
    return {"cells": join_key((k, h, g, f)), "associators": [join_key(key) for key in keys]}


def _check_units(b: Bicat, report: CheckReport) -> None:
    if not b.identities:
        for name in ("triangle", "unitor_naturality"):
            report.skip(name, "no identity 1-cells")
        return
    report.record("triangle", 0.0)
    report.record("unitor_naturality", 0.0)
    for (x, y, z), (hg, hf) in b.chains(2):
        if y not in b.identities:
            continue
        one = b.identities[y]
        for g, f in product(hg, hf):
            g1, f1 = b.c(g, one), b.c(one, f)
            lhs = b.a(g, one, f) + b.left.get(f, 0.0) + b.h(g, f1, g, f) + b.v(b.c(g1, f), b.c(g, f1), b.c(g, f))
            rhs = b.right.get(g, 0.0) + b.h(g1, f, g, f)
            report.record("triangle", angles.dist(lhs - rhs), {"cells": join_key((g, f))})
    for (x, y), cells in b.homs.items():
        if x not in b.identities or y not in b.identities:
            continue
        ex, ey = b.identities[x], b.identities[y]
        for f1, f2 in product(cells, repeat=2):
            lf1, lf2 = b.c(ey, f1), b.c(ey, f2)
            lhs = b.h(ey, f1, ey, f2) + b.left.get(f2, 0.0) + b.v(lf1, lf2, f2)
            rhs = b.left.get(f1, 0.0) + b.v(lf1, f1, f2)
            report.record("unitor_naturality", angles.dist(lhs - rhs), {"unitor": "left", "cells": join_key((f1, f2))})
            rf1, rf2 = b.c(f1, ex), b.c(f2, ex)
            lhs = b.h(f1, ex, f2, ex) + b.right.get(f2, 0.0) + b.v(rf1, rf2, f2)
            rhs = b.right.get(f1, 0.0) + b.v(rf1, f1, f2)
            report.record("unitor_naturality", angles.dist(lhs - rhs), {"unitor": "right", "cells": join_key((f1, f2))})


def group_bicat(elements: List[Point], multiply: Mapping[Tuple[Point, Point], Point], unit: Point) -> Bicat:
    """A finite group as a one-object bicategory with identity 2-cells."""
    return Bicat(
        ("*",),
        {e: ("*", "*") for e in elements},
        dict(multiply),
        identities={"*": unit},
    )


def canonical_unitors(b: Bicat) -> Bicat:
    """Unitors fixed by the identity 1-cells alone.

    The right unitor of each identity is the base 2-cell 1∘1 ⇒ 1. ``left[f]``
    then solves the triangle at (1, f) and ``right[g]`` the triangle at (g, 1),
    so the remaining triangles and naturality squares are genuine checks.
    """
    left: Dict[Point, float] = {}
    right: Dict[Point, float] = {}
    for f, (_, y) in b.cells.items():
        e = b.identities.get(y)
        if e is None:
            continue
        ee, ef = b.c(e, e), b.c(e, f)
        left[f] = angles.add(b.h(ee, f, e, f), -b.a(e, e, f), -b.h(e, ef, e, f), -b.v(b.c(ee, f), b.c(e, ef), b.c(e, f)))
    for g, (y, _) in b.cells.items():
        e = b.identities.get(y)
        if e is None:
            continue
        ee, ge = b.c(e, e), b.c(g, e)
        right[g] = angles.add(
            b.a(g, e, e), left[e], b.h(g, ee, g, e), b.v(b.c(ge, e), b.c(g, ee), b.c(g, e)), -b.h(ge, e, g, e)
        )
    return replace(b, left=left, right=right, synthesized_units=True)
