"""Finite abstract simplicial complexes standing in for cover nerves."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from common.errors import DegreeOutOfRange, ValidationFailure

Face = Tuple[int, ...]


@dataclass(frozen=True)
class Complex:
    """Vertices are integers; faces are strictly increasing tuples.

    ``labels`` optionally names each vertex (used by nerves of covers whose
    vertices are cover indices or (point, index) pairs).
    """

    vertices: Tuple[int, ...]
    faces: FrozenSet[Face]
    labels: Optional[Tuple[Hashable, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValidationFailure("complex needs at least one vertex")
        vset = set(self.vertices)
        for face in self.faces:
            if not face or any(a >= b for a, b in zip(face, face[1:])):
                raise ValidationFailure("faces must be strictly increasing", {"face": list(face)})
            if not set(face) <= vset:
                raise ValidationFailure("face uses unknown vertex", {"face": list(face)})
            for r in range(1, len(face)):
                for sub in combinations(face, r):
                    if sub not in self.faces:
                        raise ValidationFailure(
                            "faces are not closed under subsets",
                            {"face": list(face), "missing": list(sub)},
                        )
        for v in self.vertices:
            if (v,) not in self.faces:
                raise ValidationFailure("vertex without 0-face", {"vertex": v})

    @classmethod
    def from_maximal_faces(
        cls,
        maximal_faces: Iterable[Sequence[int]],
        vertices: Optional[Iterable[int]] = None,
        labels: Optional[Sequence[Hashable]] = None,
    ) -> "Complex":
        faces = set()
        verts = set(vertices or ())
        for top in maximal_faces:
            top = tuple(sorted(set(int(v) for v in top)))
            verts.update(top)
            for r in range(1, len(top) + 1):
                faces.update(combinations(top, r))
        faces.update((v,) for v in verts)
        return cls(tuple(sorted(verts)), frozenset(faces), tuple(labels) if labels else None)

    @cached_property
    def dim(self) -> int:
        return max(len(f) for f in self.faces) - 1

    @cached_property
    def _by_degree(self) -> Dict[int, List[Face]]:
        out: Dict[int, List[Face]] = {}
        for face in self.faces:
            out.setdefault(len(face) - 1, []).append(face)
        for k in out:
            out[k].sort()
        return out

    def faces_of(self, k: int) -> List[Face]:
        """Sorted k-faces; empty outside 0..dim."""
        return self._by_degree.get(k, [])

    @cached_property
    def _index(self) -> Dict[Face, int]:
        index: Dict[Face, int] = {}
        for faces in self._by_degree.values():
            for i, face in enumerate(faces):
                index[face] = i
        return index

    def index(self, face: Sequence[int]) -> int:
        return self._index[tuple(face)]

    def count(self, k: int) -> int:
        return len(self.faces_of(k))

    def check_degree(self, k: int) -> None:
        if not 0 <= k <= self.dim:
            raise DegreeOutOfRange(f"degree {k} outside 0..{self.dim}", {"degree": k})

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.count(k) for k in range(self.dim + 1))

    def maximal_faces(self) -> List[Face]:
        out = []
        for face in sorted(self.faces, key=lambda f: (len(f), f)):
            if not any(len(g) == len(face) + 1 and set(face) < set(g) for g in self.faces_of(len(face))):
                out.append(face)
        return out

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "maximal_faces": [list(f) for f in self.maximal_faces()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Complex":
        return cls.from_maximal_faces(data["maximal_faces"], vertices=data.get("vertices"))


def make_boundary_simplex(n: int) -> Complex:
    """∂Δ^{n+1}: n+2 vertices, every proper subset is a face."""
    if n < 1:
        raise ValidationFailure("boundary simplex needs n >= 1", {"n": n})
    verts = range(n + 2)
    return Complex.from_maximal_faces(combinations(verts, n + 1))


RP2_TRIANGLES = (
    (0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 3, 5),
    (1, 2, 3), (1, 2, 5), (1, 3, 4), (2, 4, 5), (3, 4, 5),
)


def make_rp2() -> Complex:
    """Minimal 6-vertex triangulation of the real projective plane."""
    return Complex.from_maximal_faces(RP2_TRIANGLES)


def cover_nerve(cover: Sequence[FrozenSet[Hashable]]) -> Complex:
    """Nerve of a finite cover indexed 0..len(cover)-1."""
    n = len(cover)
    maximal = []
    for r in range(n, 0, -1):
        for idx in combinations(range(n), r):
            if frozenset.intersection(*(cover[i] for i in idx)):
                maximal.append(idx)
    return Complex.from_maximal_faces(maximal, vertices=range(n))


def _sorted_points(points: Iterable[Hashable]) -> List[Hashable]:
    try:
        return sorted(points)
    except TypeError:
        return sorted(points, key=repr)


def pointwise_nerve(cover: Sequence[FrozenSet[Hashable]]) -> Complex:
    """Disjoint union over points m of the simplex on {i : m ∈ U_i}.

    Cochains on this complex are Čech cochains whose values are functions on
    the intersections, so δ is evaluated pointwise. Vertex ids enumerate the
    pairs (m, i) sorted by (m, i); ``labels`` holds the pairs.
    """
    points = _sorted_points(set().union(*cover))
    labels: List[Tuple[Hashable, int]] = []
    tops = []
    for m in points:
        members = [i for i, U in enumerate(cover) if m in U]
        start = len(labels)
        labels.extend((m, i) for i in members)
        tops.append(tuple(range(start, start + len(members))))
    return Complex.from_maximal_faces(tops, vertices=range(len(labels)), labels=labels)
