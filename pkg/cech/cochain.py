"""Cochains with integer, real or circle coefficients, and the coboundary δ."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

from cech.complex import Complex, Face
from common import angles
from common.errors import ComplexMismatch, NotSimplicial, SchemaError, ValidationFailure
from common.models import Coeff, join_key, split_int_key

Number = Union[int, float]


def _dtype(coeff: Coeff):
    return np.int64 if coeff is Coeff.INTEGER else float


@dataclass(frozen=True, eq=False)
class Cochain:
    """Values are stored in the order of ``complex.faces_of(degree)``."""

    complex: Complex
    degree: int
    coeff: Coeff
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValidationFailure("cochain degree must be >= 0", {"degree": self.degree})
        expected = self.complex.count(self.degree)
        values = np.asarray(self.values, dtype=_dtype(self.coeff)).reshape(-1)
        if values.shape != (expected,):
            raise SchemaError(
                "cochain must have one value per face",
                {"degree": self.degree, "expected": expected, "got": int(values.size)},
            )
        if self.coeff is Coeff.CIRCLE:
            values = np.asarray(angles.wrap(values), dtype=float).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, K: Complex, degree: int, coeff: Coeff) -> "Cochain":
        return cls(K, degree, coeff, np.zeros(K.count(degree)))

    @classmethod
    def from_function(cls, K: Complex, degree: int, coeff: Coeff, fn: Callable[[Face], Number]) -> "Cochain":
        return cls(K, degree, coeff, np.array([fn(face) for face in K.faces_of(degree)]))

    @classmethod
    def from_mapping(cls, K: Complex, degree: int, coeff: Coeff, values: Mapping[Face, Number]) -> "Cochain":
        missing = [face for face in K.faces_of(degree) if tuple(face) not in values]
        if missing:
            raise SchemaError("cochain misses faces", {"face": list(missing[0])})
        return cls.from_function(K, degree, coeff, lambda face: values[face])

    @property
    def faces(self):
        return self.complex.faces_of(self.degree)

    def __getitem__(self, face: Sequence[int]) -> Number:
        value = self.values[self.complex.index(face)]
        return int(value) if self.coeff is Coeff.INTEGER else float(value)

    def items(self):
        return ((face, self[face]) for face in self.faces)

    def _like(self, values: np.ndarray) -> "Cochain":
        return Cochain(self.complex, self.degree, self.coeff, values)

    def _check_compatible(self, other: "Cochain") -> None:
        if other.complex != self.complex or other.degree != self.degree or other.coeff is not self.coeff:
            raise ComplexMismatch(
                "cochains live on different complexes, degrees or coefficients",
                {"degrees": [self.degree, other.degree], "coeffs": [self.coeff.value, other.coeff.value]},
            )

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        return self._like(self.values + other.values)

    def __neg__(self) -> "Cochain":
        return self._like(-self.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def as_coeff(self, coeff: Coeff) -> "Cochain":
        """Change of coefficients along ℤ → ℝ → ℝ/ℤ (and ℤ → ℝ/ℤ)."""
        if coeff is Coeff.INTEGER and self.coeff is not Coeff.INTEGER:
            raise ValidationFailure("no coefficient map into the integers", {"from": self.coeff.value})
        if coeff is Coeff.REAL and self.coeff is Coeff.CIRCLE:
            raise ValidationFailure("no coefficient map from circle to real", {})
        return Cochain(self.complex, self.degree, coeff, self.values.astype(_dtype(coeff)))

    def max_abs(self) -> float:
        """Size of the cochain: angle distance to 0 for circle values."""
        if self.values.size == 0:
            return 0.0
        if self.coeff is Coeff.CIRCLE:
            return angles.max_dist(self.values)
        return float(np.max(np.abs(self.values)))

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coeff": self.coeff.value,
            "values": {join_key(face): value for face, value in self.items()},
        }

    @classmethod
    def from_json(cls, K: Complex, data: Mapping) -> "Cochain":
        coeff = Coeff(data["coeff"])
        values = {split_int_key(key): value for key, value in data["values"].items()}
        return cls.from_mapping(K, int(data["degree"]), coeff, values)


@lru_cache(maxsize=128)
def coboundary_matrix(K: Complex, k: int) -> np.ndarray:
    """Integer matrix of δ: C^k → C^{k+1}, rows indexed by (k+1)-faces."""
    rows, cols = K.faces_of(k + 1), K.faces_of(k) if k >= 0 else []
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    if k < 0:
        return D
    for r, face in enumerate(rows):
        for i in range(len(face)):
            D[r, K.index(face[:i] + face[i + 1:])] += (-1) ** i
    D.setflags(write=False)
    return D


def delta(c: Cochain) -> Cochain:
    """(δc)(v_0…v_{k+1}) = Σ_i (−1)^i c(v_0…v̂_i…v_{k+1})."""
    D = coboundary_matrix(c.complex, c.degree)
    if c.coeff is Coeff.INTEGER:
        values = D @ c.values
    else:
        values = D.astype(float) @ c.values
    return Cochain(c.complex, c.degree + 1, c.coeff, values)


def product_cocycle(g: Cochain, h: Cochain) -> Cochain:
    return g + h


def dual_cocycle(g: Cochain) -> Cochain:
    return -g


def pullback_cocycle(g: Cochain, phi: Mapping[int, int], domain: Complex) -> Cochain:
    """Pull g back along the vertex map phi: domain → g.complex.

    Degenerate images contribute 0; a non-degenerate image is sorted and the
    value picks up the sign of the sorting permutation.
    """
    target = g.complex
    if set(phi) != set(domain.vertices):
        raise NotSimplicial("vertex map must be defined on every vertex", {"missing": sorted(set(domain.vertices) - set(phi))})
    check_simplicial(phi, domain, target)
    values = []
    for face in domain.faces_of(g.degree):
        image = [phi[v] for v in face]
        if len(set(image)) < len(image):
            values.append(0)
            continue
        value = g[tuple(sorted(image))]
        values.append(value if _permutation_sign(image) > 0 else -value)
    return Cochain(domain, g.degree, g.coeff, np.array(values))


def check_simplicial(phi: Mapping[int, int], domain: Complex, target: Complex) -> None:
    for face in domain.faces:
        image = tuple(sorted(set(phi[v] for v in face)))
        if image not in target.faces:
            raise NotSimplicial("image of a face is not a face", {"face": list(face), "image": list(image)})


def _permutation_sign(seq: Sequence[int]) -> int:
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def random_cochain(
    K: Complex, degree: int, coeff: Coeff, rng: np.random.Generator, bound: Optional[int] = 5
) -> Cochain:
    n = K.count(degree)
    if coeff is Coeff.INTEGER:
        values = rng.integers(-bound, bound + 1, size=n)
    elif coeff is Coeff.REAL:
        values = rng.normal(size=n)
    else:
        values = rng.random(size=n)
    return Cochain(K, degree, coeff, values)
